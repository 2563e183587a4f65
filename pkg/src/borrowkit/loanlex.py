"""Loanword lexicon induction from bilingual dictionary data, and lexicon lookup.

Pipeline: POS/proper-noun filter -> pattern matching per donor translation ->
parallel-borrowing resolution -> shared-inheritance filter -> human overrides.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from borrowkit.patterns import DONOR_LANGS, PatternIndex, fold, matches

log = logging.getLogger(__name__)

LEXICON_COLUMNS = ("lu_form", "variants", "donor", "source_form", "pattern_id", "pos", "provenance")
LEXICON_MAGIC = "# borrowkit-lexicon"
MANUAL_PATTERN = "manual"


class DictionaryError(ValueError):
    pass


class OverrideError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class POS(str, enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    OTHER = "OTHER"


class Provenance(str, enum.Enum):
    AUTO = "AUTO"
    HUMAN_ADDED = "HUMAN_ADDED"
    HUMAN_EDITED = "HUMAN_EDITED"


class ChainDirection(str, enum.Enum):
    EN_FROM_FR = "EN_FROM_FR"
    FR_FROM_EN = "FR_FROM_EN"
    DE_FROM_FR = "DE_FROM_FR"
    DE_FROM_EN = "DE_FROM_EN"

    @property
    def borrower(self) -> str:
        return self.value.split("_FROM_")[0]

    @property
    def origin(self) -> str:
        return self.value.split("_FROM_")[1]


@dataclass(frozen=True)
class DictionaryEntry:
    headword: str
    pos: POS
    proper_noun: bool = False
    translations: dict[str, tuple[str, ...]] = field(default_factory=dict)
    variants: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.headword:
            raise DictionaryError("empty headword")
        for donor, forms in self.translations.items():
            if donor not in DONOR_LANGS:
                raise DictionaryError(f"{self.headword}: unknown donor language {donor!r}")
            if any(not f for f in forms):
                raise DictionaryError(f"{self.headword}: empty {donor} translation")

    @classmethod
    def from_dict(cls, rec: dict) -> "DictionaryEntry":
        try:
            pos = POS(rec.get("pos", "OTHER"))
        except ValueError:
            pos = POS.OTHER
        trans = {
            k: tuple(v) for k, v in (rec.get("translations") or {}).items() if k in DONOR_LANGS
        }
        return cls(rec["headword"], pos, bool(rec.get("proper_noun", False)), trans,
                   tuple(rec.get("variants") or ()))

    def to_dict(self) -> dict:
        return {
            "headword": self.headword,
            "pos": self.pos.value,
            "proper_noun": self.proper_noun,
            "translations": {k: list(v) for k, v in self.translations.items()},
            "variants": list(self.variants),
        }


@dataclass(frozen=True)
class LexiconEntry:
    lu_form: str
    donor: str
    source_form: str
    pattern_id: str
    pos: str = POS.NOUN.value
    provenance: Provenance = Provenance.AUTO
    variants: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.lu_form, self.donor)


@dataclass(frozen=True)
class DonorChainList:
    direction: ChainDirection
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return fold(word) in self.words

    @classmethod
    def from_words(cls, direction, words: Iterable[str]) -> "DonorChainList":
        return cls(ChainDirection(direction), frozenset(fold(w) for w in words))


@dataclass(frozen=True)
class InheritanceList:
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return fold(word) in self.words

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "InheritanceList":
        return cls(frozenset(fold(w) for w in words))


# --- I/O --------------------------------------------------------------------

def read_dictionary(path: str | Path) -> Iterator[DictionaryEntry]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield DictionaryEntry.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, DictionaryError) as exc:
                raise DictionaryError(f"{path}:{lineno}: {exc}") from exc


def read_word_list(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]


def read_chain_list(path: str | Path, direction) -> DonorChainList:
    return DonorChainList.from_words(direction, read_word_list(path))


def read_inheritance_list(path: str | Path) -> InheritanceList:
    return InheritanceList.from_words(read_word_list(path))


# --- stages -----------------------------------------------------------------

KEPT_POS = frozenset({POS.NOUN, POS.VERB, POS.ADJ})


def filter_candidates(entries: Iterable[DictionaryEntry]) -> Iterator[DictionaryEntry]:
    for e in entries:
        if e.pos in KEPT_POS and not e.proper_noun:
            yield e


def match_entry(entry: DictionaryEntry, index: PatternIndex) -> dict[str, list[tuple[str, str]]]:
    """Every (pattern_id, source_form) pairing per donor, in registry then translation order."""
    out: dict[str, list[tuple[str, str]]] = {}
    candidates = index.lookup(entry.headword)
    for donor in DONOR_LANGS:
        forms = entry.translations.get(donor, ())
        hits = [
            (p.id, form)
            for p in candidates
            if donor in p.donor_langs
            for form in forms
            if matches(p, entry.headword, form)
        ]
        if hits:
            out[donor] = hits
    return out


class ResolutionKind(str, enum.Enum):
    SINGLE = "SINGLE"
    CHAINED = "CHAINED"
    PARALLEL = "PARALLEL"


@dataclass(frozen=True)
class Resolution:
    kind: ResolutionKind
    donor: str | None = None


def resolve_parallel(found: dict[str, list[tuple[str, str]]],
                     chains: Sequence[DonorChainList]) -> Resolution:
    donors = [d for d in DONOR_LANGS if found.get(d)]
    if not donors:
        raise ValueError("resolve_parallel needs at least one matched donor")
    if len(donors) == 1:
        return Resolution(ResolutionKind.SINGLE, donors[0])
    if len(donors) > 2:
        return Resolution(ResolutionKind.PARALLEL)
    origins = set()
    for chain in chains:
        a, b = chain.direction.borrower, chain.direction.origin
        if a in donors and b in donors and any(form in chain for _, form in found[a]):
            origins.add(b)
    if len(origins) == 1:
        return Resolution(ResolutionKind.CHAINED, origins.pop())
    return Resolution(ResolutionKind.PARALLEL)


class InheritanceDecision(str, enum.Enum):
    KEEP = "KEEP"
    RECLASSIFY_NATIVE = "RECLASSIFY_NATIVE"


def inheritance_filter(lu_form: str, source_form: str, inheritance: InheritanceList,
                       donor: str = "DE") -> InheritanceDecision:
    if donor != "DE":
        return InheritanceDecision.KEEP
    if source_form in inheritance:
        return InheritanceDecision.RECLASSIFY_NATIVE
    return InheritanceDecision.KEEP


# --- lexicon ----------------------------------------------------------------

class Lexicon:
    """Ordered mapping (lu_form, donor) -> LexiconEntry."""

    def __init__(self, entries: Iterable[LexiconEntry] = (), version: str = "1"):
        self.version = version
        self._entries: dict[tuple[str, str], LexiconEntry] = {}
        for e in entries:
            if e.key in self._entries:
                raise ValueError(f"duplicate lexicon key {e.key}")
            self._entries[e.key] = e

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    def __contains__(self, key):
        return key in self._entries

    def get(self, lu_form: str, donor: str) -> LexiconEntry | None:
        return self._entries.get((lu_form, donor))

    def put(self, entry: LexiconEntry) -> None:
        self._entries[entry.key] = entry

    def remove(self, lu_form: str, donor: str) -> bool:
        return self._entries.pop((lu_form, donor), None) is not None

    def by_lu_form(self, lu_form: str) -> list[LexiconEntry]:
        return [e for e in self._entries.values() if e.lu_form == lu_form]

    def sorted_entries(self) -> list[LexiconEntry]:
        return sorted(self._entries.values(), key=lambda e: (e.lu_form, e.donor))

    def form_count(self) -> int:
        """Headwords plus their distinct variants."""
        forms = set()
        for e in self._entries.values():
            forms.add(e.lu_form)
            forms.update(e.variants)
        return len(forms)

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write(f"{LEXICON_MAGIC} version={self.version}\n")
        writer = csv.writer(buf, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(LEXICON_COLUMNS)
        for e in self.sorted_entries():
            writer.writerow([e.lu_form, "|".join(e.variants), e.donor, e.source_form,
                             e.pattern_id, e.pos, e.provenance.value])
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_tsv(), encoding="utf-8", newline="")

    @classmethod
    def from_tsv(cls, text: str) -> "Lexicon":
        lines = text.splitlines()
        version = "1"
        if lines and lines[0].startswith(LEXICON_MAGIC):
            _, _, rest = lines[0].partition("version=")
            version = rest.strip() or "1"
            lines = lines[1:]
        reader = csv.reader(lines, delimiter="\t")
        header = next(reader, None)
        if header is None or tuple(header) != LEXICON_COLUMNS:
            raise ValueError(f"lexicon header must be {LEXICON_COLUMNS}")
        entries = []
        for row in reader:
            if not row:
                continue
            rec = dict(zip(LEXICON_COLUMNS, row))
            entries.append(LexiconEntry(
                rec["lu_form"], rec["donor"], rec["source_form"], rec["pattern_id"], rec["pos"],
                Provenance(rec["provenance"]), tuple(v for v in rec["variants"].split("|") if v),
            ))
        return cls(entries, version)

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


class LexiconIndex:
    """Exact-match lookup on case-folded forms from the LU side and the donor side."""

    def __init__(self, lexicon: Iterable[LexiconEntry]):
        self.lu_side: dict[str, list[LexiconEntry]] = {}
        self.donor_side: dict[str, list[LexiconEntry]] = {}
        entries = sorted(lexicon, key=lambda e: (e.lu_form, e.donor))
        for e in entries:
            for form in dict.fromkeys((e.lu_form, *e.variants)):
                self.lu_side.setdefault(fold(form), []).append(e)
            self.donor_side.setdefault(fold(e.source_form), []).append(e)
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def lookup_lu(self, form: str) -> list[LexiconEntry]:
        return self.lu_side.get(fold(form), [])

    def lookup_donor(self, form: str) -> list[LexiconEntry]:
        return self.donor_side.get(fold(form), [])


def build_index(lexicon: Iterable[LexiconEntry]) -> LexiconIndex:
    return LexiconIndex(lexicon)


# --- overrides --------------------------------------------------------------

@dataclass
class OverrideStats:
    added: int = 0
    edited: int = 0
    removed: int = 0
    missing_removes: int = 0
    variants_added: int = 0
    missing_variant_targets: int = 0


def parse_overrides(lines: Iterable[str]) -> list[tuple[int, str, list[str]]]:
    ops = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        op, *args = line.split("\t")
        if op == "ADD":
            if not 3 <= len(args) <= 5:
                raise OverrideError("ADD needs lu_form, donor, source_form [, pos [, pattern_id]]", lineno)
            if args[1] not in DONOR_LANGS:
                raise OverrideError(f"unknown donor {args[1]!r}", lineno)
            if len(args) >= 4 and args[3] not in POS.__members__:
                raise OverrideError(f"unknown POS {args[3]!r}", lineno)
        elif op == "REMOVE":
            if len(args) != 2 or args[1] not in DONOR_LANGS:
                raise OverrideError("REMOVE needs lu_form and a donor language", lineno)
        elif op == "ADD_VARIANT":
            if len(args) != 2:
                raise OverrideError("ADD_VARIANT needs lu_form and variant", lineno)
        else:
            raise OverrideError(f"unknown operation {op!r}", lineno)
        if any(not a or "|" in a for a in args):
            raise OverrideError("empty argument or '|' in argument", lineno)
        ops.append((lineno, op, args))
    return ops


def _infer_pattern(index: PatternIndex | None, lu_form: str, donor: str, source: str) -> str:
    if index is not None:
        hits = index.match_all(lu_form, source, donor)
        if hits:
            return hits[0].id
    return MANUAL_PATTERN


def apply_overrides(lexicon: Lexicon, overrides: str | Path | Iterable[str],
                    index: PatternIndex | None = None) -> tuple[Lexicon, OverrideStats]:
    """Apply ADD / REMOVE / ADD_VARIANT commands in file order (mutates and returns ``lexicon``)."""
    if isinstance(overrides, (str, Path)):
        with open(overrides, encoding="utf-8") as fh:
            ops = parse_overrides(fh)
    else:
        ops = parse_overrides(overrides)
    stats = OverrideStats()
    for lineno, op, args in ops:
        if op == "ADD":
            lu, donor, source = args[:3]
            pos = args[3] if len(args) > 3 else POS.NOUN.value
            pattern_id = args[4] if len(args) > 4 else _infer_pattern(index, lu, donor, source)
            old = lexicon.get(lu, donor)
            prov = Provenance.HUMAN_EDITED if old is not None else Provenance.HUMAN_ADDED
            lexicon.put(LexiconEntry(lu, donor, source, pattern_id, pos, prov, old.variants if old else ()))
            if old is None:
                stats.added += 1
            else:
                stats.edited += 1
        elif op == "REMOVE":
            if lexicon.remove(*args):
                stats.removed += 1
            else:
                stats.missing_removes += 1
                log.warning("overrides line %d: REMOVE %s/%s: no such entry", lineno, *args)
        else:
            lu, variant = args
            targets = lexicon.by_lu_form(lu)
            if not targets:
                stats.missing_variant_targets += 1
                log.warning("overrides line %d: ADD_VARIANT %s: no such entry", lineno, lu)
            for e in targets:
                if variant in e.variants or variant == e.lu_form:
                    continue
                prov = Provenance.HUMAN_EDITED if e.provenance is Provenance.AUTO else e.provenance
                lexicon.put(LexiconEntry(e.lu_form, e.donor, e.source_form, e.pattern_id, e.pos, prov,
                                         (*e.variants, variant)))
                stats.variants_added += 1
    return lexicon, stats


# --- induction --------------------------------------------------------------

@dataclass
class InductionReport:
    dictionary_entries: int = 0
    candidates: int = 0
    matched: int = 0
    unmatched: int = 0
    emitted: int = 0
    parallel_excluded: int = 0
    chained_resolved: int = 0
    inheritance_reclassified: int = 0
    duplicates_merged: int = 0
    human_added: int = 0
    human_edited: int = 0
    human_removed: int = 0
    missing_removes: int = 0
    variants_added: int = 0
    lexicon_entries: int = 0
    lexicon_forms: int = 0
    per_donor: dict[str, int] = field(default_factory=dict)
    per_pattern: dict[str, int] = field(default_factory=dict)
    alternates: list[dict] = field(default_factory=list)
    parallel_headwords: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def induce(dictionary: Iterable[DictionaryEntry], index: PatternIndex,
           chains: Sequence[DonorChainList] = (), inheritance: InheritanceList | None = None,
           overrides: str | Path | Iterable[str] | None = None,
           version: str = "1") -> tuple[Lexicon, InductionReport]:
    report = InductionReport()
    inheritance = inheritance or InheritanceList(frozenset())
    lexicon = Lexicon(version=version)
    entries = list(dictionary)
    report.dictionary_entries = len(entries)
    for entry in filter_candidates(entries):
        report.candidates += 1
        found = match_entry(entry, index)
        if not found:
            report.unmatched += 1
            continue
        report.matched += 1
        res = resolve_parallel(found, chains)
        if res.kind is ResolutionKind.PARALLEL:
            report.parallel_excluded += 1
            report.parallel_headwords.append(entry.headword)
            continue
        if res.kind is ResolutionKind.CHAINED:
            report.chained_resolved += 1
        donor = res.donor
        pattern_id, source = found[donor][0]
        if len(found[donor]) > 1:
            report.alternates.append({
                "headword": entry.headword, "donor": donor,
                "chosen": [pattern_id, source], "others": [list(x) for x in found[donor][1:]],
            })
        if inheritance_filter(entry.headword, source, inheritance, donor) is InheritanceDecision.RECLASSIFY_NATIVE:
            report.inheritance_reclassified += 1
            continue
        report.emitted += 1
        cand = LexiconEntry(entry.headword, donor, source, pattern_id, entry.pos.value,
                            Provenance.AUTO, tuple(v for v in entry.variants if v != entry.headword))
        old = lexicon.get(entry.headword, donor)
        if old is not None:
            report.duplicates_merged += 1
            merged = tuple(dict.fromkeys((*old.variants, *cand.variants)))
            lexicon.put(LexiconEntry(old.lu_form, old.donor, old.source_form, old.pattern_id,
                                     old.pos, old.provenance, merged))
            continue
        lexicon.put(cand)
    if overrides is not None:
        lexicon, ostats = apply_overrides(lexicon, overrides, index)
        report.human_added = ostats.added
        report.human_edited = ostats.edited
        report.human_removed = ostats.removed
        report.missing_removes = ostats.missing_removes
        report.variants_added = ostats.variants_added
    report.lexicon_entries = len(lexicon)
    report.lexicon_forms = lexicon.form_count()
    report.per_donor = {d: 0 for d in DONOR_LANGS}
    per_pattern: Counter = Counter()
    for e in lexicon:
        report.per_donor[e.donor] = report.per_donor.get(e.donor, 0) + 1
        per_pattern[e.pattern_id] += 1
    report.per_pattern = dict(sorted(per_pattern.items()))
    return lexicon, report

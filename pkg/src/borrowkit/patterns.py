"""Donor-to-recipient adaptation patterns: parsing, matching, inversion, indexing.

A pattern is written as ``exact`` or as one or more edits joined by ``+``.
Each edit is ``donor>recipient`` (a suffix rewrite), ``^donor>recipient``
(a prefix rewrite) or ``-x`` (deletion of a final ``x``).  The first edit is
anchored at the word boundary; any further edits are inner substitutions
applied to the remaining stem (``on>oun+c>k`` turns *collection* into
*Kollektioun*).

Comparison is case-folded.  Affixes must match exactly; the stems left after
stripping them are compared without diacritics so that *Decapotabel* still
pairs with *décapotable*.  A recipient affix written with an upper-case letter
(``^É>E``) is matched literally on the Luxembourgish side.
"""

from __future__ import annotations

import enum
import functools
import itertools
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, spec: str, position: int):
        super().__init__(f"{message} at position {position} in {spec!r}")
        self.spec = spec
        self.position = position


class RegistryError(ValueError):
    pass


class Position(str, enum.Enum):
    SUFFIX = "SUFFIX"
    PREFIX = "PREFIX"


class PatternClass(str, enum.Enum):
    MORPHOLOGICAL = "MORPHOLOGICAL"
    ORTHOGRAPHIC = "ORTHOGRAPHIC"
    LEXICAL = "LEXICAL"


DONOR_LANGS = ("DE", "FR", "EN")


@functools.lru_cache(maxsize=1 << 18)
def fold(text: str) -> str:
    return unicodedata.normalize("NFC", text).casefold()


def strip_marks(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def stem_key(text: str) -> str:
    return strip_marks(fold(text))


@dataclass(frozen=True)
class Edit:
    position: Position
    donor_affix: str
    recipient_affix: str

    def __post_init__(self):
        if self.donor_affix == self.recipient_affix:
            raise ValueError(f"vacuous edit {self.donor_affix!r}>{self.recipient_affix!r}")

    @property
    def case_sensitive(self) -> bool:
        return self.recipient_affix != self.recipient_affix.casefold()

    def render(self) -> str:
        mark = "^" if self.position is Position.PREFIX else ""
        if not self.recipient_affix and self.position is Position.SUFFIX:
            return f"-{self.donor_affix}"
        return f"{mark}{self.donor_affix}>{self.recipient_affix}"


@dataclass(frozen=True)
class AdaptationPattern:
    id: str
    edits: tuple[Edit, ...]
    klass: PatternClass
    donor_langs: frozenset[str] = field(default_factory=lambda: frozenset(DONOR_LANGS))

    def __post_init__(self):
        if (self.klass is PatternClass.LEXICAL) != (not self.edits):
            raise ValueError(f"pattern {self.id!r}: LEXICAL class iff no edits")

    @property
    def is_lexical(self) -> bool:
        return not self.edits

    @property
    def spec(self) -> str:
        if not self.edits:
            return "exact"
        return "+".join(e.render() for e in self.edits)


def _parse_edit(chunk: str, spec: str, offset: int) -> Edit:
    position = Position.SUFFIX
    body = chunk
    if body.startswith("^"):
        position = Position.PREFIX
        body = body[1:]
        offset += 1
    if ">" not in body:
        if body.startswith("-") and len(body) > 1 and "-" not in body[1:]:
            return Edit(position, body[1:], "")
        raise PatternSyntaxError("expected '>' or '-affix'", spec, offset)
    if body.count(">") > 1:
        raise PatternSyntaxError("more than one '>'", spec, offset + body.index(">", body.index(">") + 1))
    donor, recipient = body.split(">")
    if not donor and not recipient:
        raise PatternSyntaxError("empty edit", spec, offset)
    if donor == recipient:
        raise PatternSyntaxError("vacuous edit", spec, offset)
    return Edit(position, donor, recipient)


def parse_pattern(
    spec: str,
    *,
    id: str | None = None,
    klass: PatternClass | str | None = None,
    donor_langs: Iterable[str] = DONOR_LANGS,
) -> AdaptationPattern:
    """Parse the pattern DSL.

    ``klass`` is only consulted for non-exact patterns (the registry supplies
    it); ``exact`` is always LEXICAL.
    """
    text = unicodedata.normalize("NFC", spec.strip())
    if not text:
        raise PatternSyntaxError("empty pattern", spec, 0)
    langs = frozenset(donor_langs)
    if text == "exact":
        return AdaptationPattern(id or "exact", (), PatternClass.LEXICAL, langs)
    edits = []
    offset = 0
    for chunk in text.split("+"):
        if not chunk:
            raise PatternSyntaxError("empty edit", spec, offset)
        edits.append(_parse_edit(chunk, spec, offset))
        offset += len(chunk) + 1
    for extra in edits[1:]:
        if not extra.recipient_affix or not extra.donor_affix:
            raise PatternSyntaxError("inner edits need both affixes", spec, 0)
    cls = PatternClass(klass) if klass is not None else PatternClass.MORPHOLOGICAL
    if cls is PatternClass.LEXICAL:
        raise PatternSyntaxError("only 'exact' may be LEXICAL", spec, 0)
    return AdaptationPattern(id or text, tuple(edits), cls, langs)


def _strip_anchor(edit: Edit, word: str, affix: str, literal: str | None = None):
    """Remove ``affix`` from the anchored end of folded ``word``; None if absent."""
    if edit.position is Position.SUFFIX:
        if not word.endswith(affix):
            return None
        return word[: len(word) - len(affix)]
    if literal is not None and not literal.startswith(edit.recipient_affix):
        return None
    if not word.startswith(affix):
        return None
    return word[len(affix):]


def matches(pattern: AdaptationPattern, lu_word: str, donor_word: str) -> bool:
    lu = fold(lu_word)
    donor = fold(donor_word)
    if not lu or not donor:
        return False
    if pattern.is_lexical:
        return lu == donor
    anchor, *inner = pattern.edits
    literal = unicodedata.normalize("NFC", lu_word) if anchor.case_sensitive else None
    donor_stem = _strip_anchor(anchor, donor, fold(anchor.donor_affix))
    lu_stem = _strip_anchor(anchor, lu, fold(anchor.recipient_affix), literal)
    if donor_stem is None or lu_stem is None:
        return False
    for edit in inner:
        src, dst = fold(edit.donor_affix), fold(edit.recipient_affix)
        if src not in donor_stem:
            return False
        donor_stem = donor_stem.replace(src, dst)
    return strip_marks(donor_stem) == strip_marks(lu_stem)


def _inner_inversions(stem: str, src: str, dst: str) -> list[str]:
    """Every way of turning a non-empty subset of ``dst`` occurrences back into ``src``."""
    sites = []
    start = stem.find(dst)
    while start != -1:
        sites.append(start)
        start = stem.find(dst, start + len(dst))
    out = []
    # 2**n blow-up; inner affixes are single letters in practice
    for r in range(1, min(len(sites), 10) + 1):
        for chosen in itertools.combinations(sites, r):
            pieces, last = [], 0
            for s in chosen:
                pieces.append(stem[last:s])
                pieces.append(src)
                last = s + len(dst)
            pieces.append(stem[last:])
            cand = "".join(pieces)
            # forward application rewrites every occurrence, so leftovers of src disqualify
            if cand.replace(src, dst) == stem:
                out.append(cand)
    return out


def donor_candidates(pattern: AdaptationPattern, lu_word: str) -> list[str]:
    """Case-folded donor forms that ``pattern`` would turn into ``lu_word``."""
    lu = fold(lu_word)
    if not lu:
        return []
    if pattern.is_lexical:
        return [lu]
    anchor, *inner = pattern.edits
    literal = unicodedata.normalize("NFC", lu_word) if anchor.case_sensitive else None
    stem = _strip_anchor(anchor, lu, fold(anchor.recipient_affix), literal)
    if stem is None:
        return []
    stems = [stem]
    for edit in reversed(inner):
        src, dst = fold(edit.donor_affix), fold(edit.recipient_affix)
        stems = [s for base in stems for s in _inner_inversions(base, src, dst)]
    d_aff = fold(anchor.donor_affix)
    if anchor.position is Position.SUFFIX:
        out = [s + d_aff for s in stems]
    else:
        out = [d_aff + s for s in stems]
    return list(dict.fromkeys(out))


class PatternIndex:
    """Affix-keyed lookup from either side of a pattern to candidate patterns.

    Lookups probe one dict per distinct affix length, so cost does not grow
    with the number of patterns.  Results are supersets of the patterns that
    can actually match; callers confirm with :func:`matches`.
    """

    def __init__(self, patterns: Sequence[AdaptationPattern]):
        seen = set()
        for p in patterns:
            if p.id in seen:
                raise RegistryError(f"duplicate pattern id {p.id!r}")
            seen.add(p.id)
        self.patterns = tuple(patterns)
        self.by_id = {p.id: p for p in self.patterns}
        self._order = {p.id: i for i, p in enumerate(self.patterns)}
        self.lu_side: dict[tuple[Position, str], list[AdaptationPattern]] = {}
        self.donor_side: dict[tuple[Position, str], list[AdaptationPattern]] = {}
        self._lexical: list[AdaptationPattern] = []
        lu_lengths: dict[Position, set[int]] = {Position.SUFFIX: set(), Position.PREFIX: set()}
        donor_lengths: dict[Position, set[int]] = {Position.SUFFIX: set(), Position.PREFIX: set()}
        for p in self.patterns:
            if p.is_lexical:
                self._lexical.append(p)
                continue
            anchor = p.edits[0]
            r_key, d_key = fold(anchor.recipient_affix), fold(anchor.donor_affix)
            self.lu_side.setdefault((anchor.position, r_key), []).append(p)
            self.donor_side.setdefault((anchor.position, d_key), []).append(p)
            lu_lengths[anchor.position].add(len(r_key))
            donor_lengths[anchor.position].add(len(d_key))
        self._lu_lengths = {k: sorted(v) for k, v in lu_lengths.items()}
        self._donor_lengths = {k: sorted(v) for k, v in donor_lengths.items()}

    def __len__(self):
        return len(self.patterns)

    def _probe(self, table, lengths, word: str) -> list[AdaptationPattern]:
        if not self.patterns:
            return []
        w = fold(word)
        found = list(self._lexical)
        for n in lengths[Position.SUFFIX]:
            if n <= len(w):
                found.extend(table.get((Position.SUFFIX, w[len(w) - n:]), ()))
        for n in lengths[Position.PREFIX]:
            if n <= len(w):
                found.extend(table.get((Position.PREFIX, w[:n]), ()))
        found.sort(key=lambda p: self._order[p.id])
        return found

    def lookup(self, lu_word: str) -> list[AdaptationPattern]:
        """Candidate patterns whose recipient side fits ``lu_word``, in registry order."""
        return self._probe(self.lu_side, self._lu_lengths, lu_word)

    def lookup_donor(self, donor_word: str) -> list[AdaptationPattern]:
        return self._probe(self.donor_side, self._donor_lengths, donor_word)

    def match_all(self, lu_word: str, donor_word: str, donor_lang: str | None = None) -> list[AdaptationPattern]:
        return [
            p
            for p in self.lookup(lu_word)
            if (donor_lang is None or donor_lang in p.donor_langs) and matches(p, lu_word, donor_word)
        ]


def compile_index(patterns: Sequence[AdaptationPattern]) -> PatternIndex:
    return PatternIndex(patterns)


@dataclass(frozen=True)
class RegistryRow:
    pattern: AdaptationPattern
    source: str
    reported_tokens: int | None = None  # attested corpus frequency, when known


def default_registry_path() -> Path:
    return Path(str(resources.files("borrowkit") / "data" / "patterns.tsv"))


def read_registry(path: str | Path | None = None) -> tuple[str, list[RegistryRow]]:
    """Read a registry file; returns ``(version, rows)`` in file order."""
    path = Path(path) if path is not None else default_registry_path()
    version = "unversioned"
    rows: list[RegistryRow] = []
    header = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                if key.strip() == "version":
                    version = value.strip()
                continue
            cells = line.split("\t")
            if header is None:
                header = cells
                missing = {"id", "spec", "klass", "donor_langs"} - set(header)
                if missing:
                    raise RegistryError(f"{path}: header lacks {sorted(missing)}")
                continue
            if len(cells) != len(header):
                raise RegistryError(f"{path}:{lineno}: expected {len(header)} columns, got {len(cells)}")
            rec = dict(zip(header, cells))
            try:
                pattern = parse_pattern(
                    rec["spec"],
                    id=rec["id"],
                    klass=None if rec["spec"] == "exact" else rec["klass"],
                    donor_langs=[x for x in rec["donor_langs"].split("|") if x],
                )
            except ValueError as exc:
                raise RegistryError(f"{path}:{lineno}: {exc}") from exc
            if pattern.klass.value != rec["klass"]:
                raise RegistryError(f"{path}:{lineno}: klass {rec['klass']} contradicts spec {rec['spec']!r}")
            reported = rec.get("reported_tokens", "").strip()
            try:
                count = int(reported) if reported else None
            except ValueError:
                raise RegistryError(f"{path}:{lineno}: bad reported_tokens {reported!r}") from None
            rows.append(RegistryRow(pattern, rec.get("source", ""), count))
    return version, rows


def load_registry(path: str | Path | None = None) -> list[AdaptationPattern]:
    return [row.pattern for row in read_registry(path)[1]]

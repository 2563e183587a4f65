"""Synthetic seed sentences for training the bundled language classifier.

The generator mixes a handful of natural sentences per language with random
draws from function-word and content-word lists.  Output is fully determined
by ``seed``.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from borrowkit.corpus import Lang

FUNCTION = {
    Lang.LU: """d' de an a ass den et mat fir op der dem vun e en net och am um si hien ech mir wéi wat huet
        hunn sinn ze datt well awer eng engem enger hat war waren gëtt ginn gouf
        goufen kann kënnen muss mussen wëll wëllen soll sollen wann dass wou
        bei no iwwer ënner virun duerch géint ouni zënter bis sech mer se
        hatt du dir hir säin seng eis eise ären dës dësen dëser dat deen déi hei do elo haut
        muer gëschter nach schonn scho just ganz vill méi manner all alles keen keng näischt eppes ëmmer
        ni nëmmen esou sou dann zwar trotzdem allerdéngs nämlech""",
    Lang.DE: """die der und in den das ist von zu mit sich des auf für im dem nicht ein eine als auch es an
        werden aus er hat dass sie nach wird bei einer um am sind noch wie einem über einen so zum war
        haben nur oder aber vor zur bis mehr durch man sein wurde sei ein oder weil wenn hat
        haben war waren wird werden wurde wurden kann können muss müssen will soll nicht auch noch schon
        nur sehr mehr weniger alle alles kein keine nichts etwas immer nie mit von für auf im am bei nach
        über unter vor durch gegen ohne seit bis zu zum zur sich wir sie er es ich du ihr sein seine ihre
        unser dieser diese dieses hier dort jetzt heute morgen gestern so dann also jedoch trotzdem
        nämlich zwischen während wirklich natürlich allerdings besonders bereits eigentlich""",
    Lang.FR: """de la le l' et les des d' en un du une que est pour qui dans a par plus pas au sur ne n'
        se s' il ce qu' avec son sont ou mais parce si ont était étaient
        sera seront peut peuvent doit doivent veut ne n' pas plus aussi encore déjà seulement très moins
        tous tout toute toutes rien quelque toujours jamais avec pour sur dans au aux chez après sous
        avant par contre sans depuis à se s' nous vous ils elles il elle je tu on son sa ses leur leurs
        notre ce cette ces cet ici là maintenant aujourd'hui demain hier alors donc cependant pourtant ça
        c' y en qui dont où comme bien entre pendant vraiment surtout ensemble beaucoup peu trop""",
    Lang.EN: """the of and to a in is that for it was on with as he be at by this had not are but from
        or have an they which you were her his all she there would their we him been has when who will
        more no if out so said what up its about into than them can only other new some could time these
        two may then do first any my now such like our over man me even most made after also did many
        before must through back years where much your way well down should because each just those
        people how too little state good very make world still own see men work long get here between
        both life being under never day same another know while last might us great old year off come
        since against go came right used take three because if that is are was were has have had will would can could must
        should not also still already only very more less all every nothing something always never with
        of for on in at by after under before through against without since until to we they he she it
        I you his her their our this these those here there now today tomorrow yesterday so then however
        which who where what when how between during really especially together many much few too""",
    Lang.OTHER: """o a os as um uma e ou mas porque que é são tem têm foi foram será pode não também ainda
        já só muito mais menos todos nada sempre nunca com de do da dos das para em no na por sem desde
        até nós eles ele ela eu você seu sua este esta aqui agora hoje amanhã ontem então""",
}

CONTENT = {
    Lang.LU: """Regierung Minister Ministesch Chamber Deputéierten Gemeng Gemengen Buergermeeschter Land Stad
        Haaptstad Leit Kanner Schoul Schoulen Aarbecht Joer Joren Dag Deeg Woch Mount Zäit Wieder Reen Sonn
        Wand Strooss Stroossen Auto Autoen Zuch Bus Vëlo Spidol Dokter Dokteren Wuert Wierder Sprooch
        Sproochen Zeitung Fro Froen Äntwert Léisung Suen Präisser Wirtschaft Betrib Betriber Patronat
        Gewerkschaften Steieren Gesetz Gesetzesprojet Police Pompjeeën Feier Blesséierter Affer Sträit Buch
        Bicher Film Musek Fussball Match Spiller Kultur Theater Ausstellung Wunneng Wunnengen Loyer Famill
        Famillen Fra Mann Kand Frënd Frënn Noper Duerf Dierfer Bierger Wahlen Partei Parteien Ëmwelt Klima
        Gesondheet Sécherheet Verkéier Grenz Grenzgänger Iwwerstonnen Nuecht Moien Mëtteg Owend Weekend
        Summer Wanter Fréijoer Hierscht gesot gemaach gesinn gaang komm bliwwen geholl gefrot gefuerdert
        erkläert ugekënnegt ofgeschloss gewielt entstan geschwat gefuer gelies geschriwwen gehollef
        gebraucht gewisen gestuerwen gebuer geännert verluer gewonnen verschwonnen opgemaach zougemaach
        reent schneit schafft schaffen wunnt wunnen kritt kréien mécht maachen seet soen denkt mengen weess
        wëssen gutt schlecht grouss kleng nei neien al aler wichteg schwéier einfach séier lues haart waarm
        kal richteg falsch kloer méiglech onméiglech ëffentlech lëtzebuergesch däitsch franséisch englesch
        Äddi Merci Kierch Bësch Waasser Baach Bauer Geschäft Hand Kapp Been Dëppen Kichen Gaart Schnéi""",
    Lang.DE: """Regierung Minister Parlament Abgeordneten Gemeinde Bürgermeister Land Stadt Hauptstadt Leute
        Menschen Kinder Schule Arbeit Jahr Jahre Tag Tage Woche Monat Zeit Wetter Regen Sonne Wind Straße
        Straßen Auto Zug Bus Fahrrad Krankenhaus Arzt Ärzte Wort Wörter Sprache Zeitung Frage Fragen
        Antwort Lösung Geld Preise Wirtschaft Unternehmen Betrieb Arbeitnehmer Gewerkschaften Steuern
        Haushalt Gesetz Gesetzentwurf Polizei Feuerwehr Unfall Feuer Verletzte Opfer Streit Buch Bücher
        Film Musik Konzert Fußball Spiel Mannschaft Spieler Tor Sieg Meisterschaft Kultur Theater
        Ausstellung Wohnung Wohnungen Miete Familie Frau Mann Kind Freund Freunde Nachbar Dorf Dörfer
        Bürger Wahlen Partei Parteien Mehrheit Opposition Umwelt Klima Gesundheit Sicherheit Verkehr Grenze
        Grenzgänger Überstunden Nacht Morgen Mittag Abend Wochenende Sommer Winter Frühling Herbst gesagt
        gemacht gesehen gegangen gekommen geblieben genommen gegeben gefragt gefordert erklärt angekündigt
        abgeschlossen gewählt entstanden gesprochen gefahren gelesen geschrieben geholfen gebraucht gezeigt
        gestorben geboren geändert verloren gewonnen verschwunden regnet schneit arbeitet arbeiten wohnt
        wohnen bekommt bekommen macht machen sagt sagen denkt glauben weiß wissen gut schlecht groß klein
        neu neuen alt alten wichtig schwer einfach schnell langsam laut warm kalt ganz richtig falsch klar
        möglich unmöglich öffentlich deutsch französisch englisch gleichzeitig insgesamt Kirche Wald Wasser
        Bach Bauer Geschäft Hand Kopf Küche Garten Schnee""",
    Lang.FR: """gouvernement ministre parlement députés commune bourgmestre pays ville capitale gens enfants
        école travail année années jour jours semaine mois temps météo pluie soleil vent rue rues voiture
        train vélo hôpital médecin médecins mot mots langue journal question questions réponse solution
        argent prix économie entreprise entreprises salariés syndicats impôts loi projet police pompiers
        accident incendie blessés victimes dispute livre livres film musique concert football match équipe
        joueur joueurs but victoire championnat culture théâtre exposition logement logements loyer famille
        femme homme enfant ami amis voisin village villages citoyens élections parti partis majorité
        environnement climat santé sécurité circulation frontière frontaliers heures nuit matin midi soir
        été hiver printemps automne dit fait vu allé venu resté pris donné demandé exigé expliqué annoncé
        conclu élu parlé conduit lu écrit aidé montré mort né changé perdu gagné disparu pleut neige
        travaille travaillent habite habitent reçoit recevoir faire dire pense penser sait savoir bon
        bonne mauvais grand grande petit petite nouveau nouvelle vieux important importante difficile
        simple rapide lent chaud froid vrai faux clair possible impossible public publique français
        allemand anglais voir monde comment bonjour merci chose église forêt eau rivière paysan magasin
        main tête cuisine jardin neige""",
    Lang.EN: """government minister parliament members council mayor country city capital people children
        school work year years day days week month time weather rain sun wind street streets car train bus
        bike hospital doctor doctors word words language newspaper question questions answer solution
        money prices economy company companies workers unions taxes budget law bill police firefighters
        accident fire injured victims fight book books film movie music concert football match team player
        players goal victory championship culture theatre exhibition housing flat rent family woman man
        child friend friends neighbour village villages citizens elections party parties majority opposition
        environment climate health security traffic border commuters overtime night morning noon evening
        weekend summer winter spring autumn said made seen gone came stayed taken given asked demanded
        explained announced concluded elected spoke drove read written helped shown died born changed lost
        won disappeared rains snows works working lives living gets getting makes making says saying thinks
        thinking knows knowing good bad big small new old important difficult simple fast slow loud warm
        cold whole right wrong clear possible impossible public national german french english church forest
        water river farmer shop hand head kitchen garden snow""",
    Lang.OTHER: """governo ministro cidade pessoas crianças escola trabalho ano dia semana mês tempo chuva sol
        rua carro comboio hospital médico palavra língua jornal pergunta resposta dinheiro preços economia
        empresa trabalhadores impostos lei polícia bombeiros acidente fogo feridos livro filme música
        futebol equipa jogador vitória cultura família mulher homem criança amigo vizinho aldeia eleições
        partido ambiente saúde segurança trânsito fronteira noite manhã tarde verão inverno disse fez viu
        veio ficou levou deu pediu explicou anunciou falou escreveu ajudou mudou perdeu ganhou bom boa mau
        grande pequeno novo velho importante difícil simples rápido quente frio certo claro possível
        público nacional português obrigado olá coração nação informação situação""",
}

NATURAL = {
    Lang.LU: [
        "Moien, wéi geet et dir haut?",
        "D'Regierung huet en neie Gesetzesprojet an d'Chamber deposéiert.",
        "Et reent zënter dräi Deeg an der Haaptstad.",
        "D'Police seet, datt den Accident um Mëtteg geschitt ass.",
        "Mir hunn eis um Weekend mat der Famill getraff.",
        "Wéi vill Leit wunnen eigentlech an dësem Duerf?",
        "De Minister wëll d'Steieren net an d'Luucht setzen.",
        "D'Kanner ginn all Dag mam Bus an d'Schoul.",
        "Dat Buch hunn ech gëschter Owend gelies.",
        "Si hu gesot, dass si muer erëm kommen.",
        "De Fussballmatch ass wéinst dem Reen ofgesot ginn.",
        "Hie schafft zënter zéng Joer bei engem Betrib an der Stad.",
    ],
    Lang.DE: [
        "Guten Morgen, wie geht es Ihnen heute?",
        "Die Regierung hat einen neuen Gesetzentwurf im Parlament eingebracht.",
        "Es regnet seit drei Tagen in der Hauptstadt.",
        "Die Polizei sagt, dass der Unfall am Mittag passiert ist.",
        "Wir haben uns am Wochenende mit der Familie getroffen.",
        "Wie viele Menschen wohnen eigentlich in diesem Dorf?",
        "Der Minister will die Steuern nicht erhöhen.",
        "Die Kinder fahren jeden Tag mit dem Bus zur Schule.",
        "Dieses Buch habe ich gestern Abend gelesen.",
        "Sie haben gesagt, dass sie morgen wiederkommen.",
        "Das Fußballspiel wurde wegen des Regens abgesagt.",
        "Er arbeitet seit zehn Jahren bei einem Unternehmen in der Stadt.",
    ],
    Lang.FR: [
        "Bonjour, comment allez-vous aujourd'hui?",
        "Le gouvernement a déposé un nouveau projet de loi au parlement.",
        "Il pleut depuis trois jours dans la capitale.",
        "La police dit que l'accident a eu lieu à midi.",
        "Nous nous sommes retrouvés en famille pendant le week-end.",
        "Combien de personnes habitent vraiment dans ce village?",
        "Le ministre ne veut pas augmenter les impôts.",
        "Les enfants prennent le bus tous les jours pour aller à l'école.",
        "J'ai lu ce livre hier soir.",
        "Ils ont dit qu'ils reviendraient demain.",
        "Le match de football a été annulé à cause de la pluie.",
        "Ça n'a rien à voir avec le film.",
    ],
    Lang.EN: [
        "Good morning, how are you today?",
        "The government has introduced a new bill in parliament.",
        "It has been raining for three days in the capital.",
        "The police say that the accident happened at noon.",
        "We met with the family over the weekend.",
        "How many people actually live in this village?",
        "The minister does not want to raise taxes.",
        "The children take the bus to school every day.",
        "I read this book last night.",
        "They said that they would come back tomorrow.",
        "The football match was cancelled because of the rain.",
        "He has been working for a company in the city for ten years.",
    ],
    Lang.OTHER: [
        "Bom dia, como está hoje?",
        "O governo apresentou uma nova lei no parlamento.",
        "Está a chover há três dias na capital.",
        "As crianças vão todos os dias de autocarro para a escola.",
    ],
}

DEFAULT_COUNTS = {Lang.LU: 600, Lang.DE: 600, Lang.FR: 600, Lang.EN: 600, Lang.OTHER: 200}


def _words(text: str) -> list[str]:
    return text.split()


def _zipf(n: int) -> list[float]:
    return [1.0 / (rank + 1) ** 0.8 for rank in range(n)]


def _draw(rng: random.Random, lang: Lang, n: int) -> list[str]:
    function, content = _words(FUNCTION[lang]), _words(CONTENT[lang])
    weights = _zipf(len(function))
    return [
        rng.choices(function, weights)[0] if rng.random() < 0.45 else rng.choice(content)
        for _ in range(n)
    ]


def random_sentence(rng: random.Random, lang: Lang, mixed_rate: float = 0.0) -> str:
    """One random sentence; LU sentences carry a donor insertion with probability ``mixed_rate``."""
    words = _draw(rng, lang, rng.randint(4, 16))
    if lang is Lang.LU and rng.random() < mixed_rate:
        donor = rng.choices([Lang.FR, Lang.DE, Lang.EN], [0.6, 0.25, 0.15])[0]
        at = rng.randint(0, len(words))
        words[at:at] = _draw(rng, donor, rng.randint(1, 5))
    out = []
    for w in words:
        if out and out[-1].endswith("'"):
            out[-1] += w
        else:
            out.append(w)
        if rng.random() < 0.06:
            out[-1] += ","
    text = " ".join(out).rstrip(",")
    return text[0].upper() + text[1:] + rng.choice(".....!?")


def generate(counts: dict[Lang, int] | None = None, seed: int = 42, natural: bool = True,
             mixed_rate: float = 0.3) -> list[tuple[str, Lang]]:
    rng = random.Random(seed)
    counts = counts or DEFAULT_COUNTS
    rows = []
    for lang, n in counts.items():
        fixed = list(NATURAL[lang]) if natural else []
        rows.extend((s, lang) for s in fixed[:n])
        rows.extend((random_sentence(rng, lang, mixed_rate), lang) for _ in range(n - len(fixed[:n])))
    return rows


def write_jsonl(rows, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for text, lang in rows:
            fh.write(json.dumps({"text": text, "lang": Lang(lang).value}, ensure_ascii=False) + "\n")

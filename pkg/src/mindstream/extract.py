"""Subject-verb-object structure extraction from dependency trees.

Subjects and objects become concept phrases, verbs become links, adjectives
become sub-concepts, and negation markers flip the link polarity. Works on
both UD and Stanford-style relation labels via raw-label predicates; only
one clause level is extracted per verb (dependent-clause linkage is dropped).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .conllu import Sentence, Token

EMPTY_MARKER = ""

_SUBJ_RELS = {"nsubj", "nsubjpass", "nsubj:pass"}
_OBJ_RELS = {"obj", "dobj"}
_PARTICLE_RELS = {"prt", "compound:prt"}
_AUX_RELS = {"aux", "auxpass", "aux:pass"}
_NAME_RELS = {"compound", "flat", "flat:name", "nn", "name"}
_POSS_RELS = {"poss", "nmod:poss"}
_NEG_LEMMAS = {"not", "never", "n't", "n’t"}
_NOMINAL_TAGS = {"NOUN", "PROPN", "PRON", "NN", "NNS", "NNP", "NNPS", "PRP"}
_ADJ_TAGS = {"ADJ", "JJ", "JJR", "JJS"}
_VERBAL_TAGS = {"VERB", "AUX", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"}


def is_subject_deprel(deprel: str) -> bool:
    return deprel.lower() in _SUBJ_RELS


def is_object_deprel(deprel: str) -> bool:
    return deprel.lower() in _OBJ_RELS


def is_nominal(token: Token) -> bool:
    return token.upos in _NOMINAL_TAGS


def is_adjective(token: Token) -> bool:
    return token.upos in _ADJ_TAGS


def is_verbal(token: Token) -> bool:
    return token.upos in _VERBAL_TAGS


def in_prepositional_phrase(token: Token, s: Sentence) -> bool:
    """True if the path from `token` up to its clause's verb crosses a
    preposition attachment (a `case` child, Stanford `prep`/`pobj`, or a
    collapsed `prep_*` arc)."""
    current = token
    seen = 0
    while True:
        deprel = current.deprel.lower()
        if deprel in ("pobj", "prep") or deprel.startswith("prep_"):
            return True
        if any(d.deprel.lower() == "case" for d in s.dependents(current.index)):
            return True
        if current.head == 0 or is_verbal(s.token(current.head)):
            return False
        current = s.token(current.head)
        seen += 1
        if seen > len(s.tokens):  # cycle guard for malformed trees
            return False


def conjunct_chain(head: Token, s: Sentence) -> list[Token]:
    """`head` plus its transitive nominal `conj` dependents, in token order."""
    chain = [head]
    frontier = [head]
    while frontier:
        node = frontier.pop()
        for dep in s.dependents(node.index):
            if dep.deprel.lower() == "conj" and is_nominal(dep):
                chain.append(dep)
                frontier.append(dep)
    return sorted(chain, key=lambda t: t.index)


def coordination_group(token: Token, s: Sentence) -> list[Token] | None:
    """The and-coordinated noun group `token` belongs to, or None.

    Accepts chains whose coordinator is `and` (or bare comma coordination);
    an explicit `or` coordinator disqualifies the group.
    """
    if not is_nominal(token):
        return None
    head = token
    hops = 0
    while head.deprel.lower() == "conj" and head.head > 0:
        head = s.token(head.head)
        hops += 1
        if hops > len(s.tokens):
            return None
    if not is_nominal(head):
        return None
    chain = conjunct_chain(head, s)
    if len(chain) < 2 or token not in chain:
        return None
    coordinators = [
        d.lemma.lower()
        for member in chain
        for d in s.dependents(member.index)
        if d.deprel.lower() == "cc"
    ]
    if coordinators and "and" not in coordinators:
        return None
    return chain


class PhraseKind(enum.Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    EMPTY = "empty"


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class ConceptPhrase:
    head_lemma: str
    surface: str  # head plus folded dependents (name spans, inner PPs)
    adjectives: tuple[str, ...]
    token_index: int
    kind: PhraseKind


@dataclass(frozen=True)
class VerbLink:
    lemma: str  # content lemmas of the verb group, e.g. "pick up"
    surface: str  # full group in sentence order, e.g. "could not wait to taste"
    polarity: Polarity


@dataclass(frozen=True)
class SvoTriple:
    subject: ConceptPhrase
    verb: VerbLink
    object: ConceptPhrase
    sentence_seq: int
    # Copular / predicate-adjective clauses attach the adjective under the
    # subject concept instead of creating a link; see integrate().
    copular: bool = False


EMPTY_PHRASE = ConceptPhrase(
    head_lemma=EMPTY_MARKER, surface=EMPTY_MARKER, adjectives=(), token_index=0, kind=PhraseKind.EMPTY
)


def concept_surface(head: Token, s: Sentence) -> str:
    """Fold name spans and inner prepositional material into one phrase string.

    Determiners, adjectives, possessives, and conjuncts are left out; the
    fold root's own case marker belongs to the verb group, not the concept.
    """
    collected = {head.index: head}
    frontier = [(head, True)]
    while frontier:
        node, is_root = frontier.pop()
        for dep in s.dependents(node.index):
            rel = dep.deprel.lower()
            if rel == "case":
                if not is_root:
                    collected[dep.index] = dep
                continue
            if rel in _NAME_RELS or rel == "pobj" or rel == "prep" or rel.startswith("prep_"):
                collected[dep.index] = dep
                frontier.append((dep, False))
            elif rel == "nmod" or rel.startswith("nmod:"):
                if rel in _POSS_RELS:
                    continue
                collected[dep.index] = dep
                frontier.append((dep, False))
    return " ".join(t.form for _, t in sorted(collected.items()))


def phrase_adjectives(head: Token, s: Sentence) -> tuple[str, ...]:
    return tuple(
        d.lemma for d in s.dependents(head.index) if d.deprel.lower() == "amod"
    )


def concept_phrase(
    head: Token, s: Sentence, kind: PhraseKind, with_adjectives: bool = True
) -> ConceptPhrase:
    return ConceptPhrase(
        head_lemma=head.lemma,
        surface=concept_surface(head, s),
        adjectives=phrase_adjectives(head, s) if with_adjectives else (),
        token_index=head.index,
        kind=kind,
    )


def _neg_markers(verb: Token, s: Sentence) -> list[Token]:
    markers = []
    for dep in s.dependents(verb.index):
        rel = dep.deprel.lower()
        if rel == "neg":
            markers.append(dep)
        elif rel == "advmod" and dep.lemma.lower() in _NEG_LEMMAS:
            markers.append(dep)
    return markers


def detect_polarity(verb_token: Token, s: Sentence) -> Polarity:
    """NEGATIVE iff a negation marker attaches to the verb or its aux chain."""
    if _neg_markers(verb_token, s):
        return Polarity.NEGATIVE
    for dep in s.dependents(verb_token.index):
        if dep.deprel.lower() in _AUX_RELS and _neg_markers(dep, s):
            return Polarity.NEGATIVE
    return Polarity.POSITIVE


@dataclass
class _VerbGroup:
    """Verb chain being assembled: head verb plus folded xcomp links."""

    tokens: list[Token] = field(default_factory=list)  # surface tokens
    lemmas: list[Token] = field(default_factory=list)  # content tokens for the lemma key
    trailing: list[str] = field(default_factory=list)  # collapsed-prep strings
    negative: bool = False

    def add_verb(self, verb: Token, s: Sentence) -> None:
        self.tokens.append(verb)
        self.lemmas.append(verb)
        if detect_polarity(verb, s) is Polarity.NEGATIVE:
            self.negative = True
        for dep in s.dependents(verb.index):
            rel = dep.deprel.lower()
            if rel in _AUX_RELS or rel == "cop":
                self.tokens.append(dep)
            elif rel == "neg" or (rel == "advmod" and dep.lemma.lower() in _NEG_LEMMAS):
                self.tokens.append(dep)
            elif rel in _PARTICLE_RELS:
                self.tokens.append(dep)
                self.lemmas.append(dep)
            elif rel == "mark" and dep.lemma.lower() == "to":
                self.tokens.append(dep)

    def add_preposition(self, prep: Token | str) -> None:
        if isinstance(prep, Token):
            self.tokens.append(prep)
        elif prep:
            self.trailing.append(prep)

    def link(self, polarity: Polarity | None = None) -> VerbLink:
        ordered = sorted(set(self.tokens), key=lambda t: t.index)
        surface = " ".join(t.form for t in ordered)
        if self.trailing:
            surface = " ".join([surface, *self.trailing])
        lemma = " ".join(
            t.lemma.lower() for t in sorted(set(self.lemmas), key=lambda t: t.index)
        )
        if polarity is None:
            polarity = Polarity.NEGATIVE if self.negative else Polarity.POSITIVE
        return VerbLink(lemma=lemma, surface=surface, polarity=polarity)


def _oblique_objects(verb: Token, s: Sentence) -> list[tuple[Token, Token | str]]:
    """Oblique nominal dependents usable as objects: (head, preposition)."""
    found: list[tuple[Token, Token | str]] = []
    for dep in s.dependents(verb.index):
        rel = dep.deprel.lower()
        if rel == "obl" or rel.startswith("obl:") or rel == "nmod":
            case = next(
                (d for d in s.dependents(dep.index) if d.deprel.lower() == "case"), ""
            )
            found.append((dep, case))
        elif rel.startswith("prep_"):
            found.append((dep, rel.split("_", 1)[1]))
        elif rel == "prep":
            for pobj in s.dependents(dep.index):
                if pobj.deprel.lower() == "pobj":
                    found.append((pobj, dep))
    return found


def _own_subjects(verb: Token, s: Sentence) -> list[Token]:
    return [d for d in s.dependents(verb.index) if is_subject_deprel(d.deprel)]


def _cop_dep(token: Token, s: Sentence) -> Token | None:
    for dep in s.dependents(token.index):
        if dep.deprel.lower() == "cop":
            return dep
    return None


def extract_triples(s: Sentence) -> list[SvoTriple]:
    """Instantiate the subject-verb-object structure for every clause of `s`.

    Coordinated subjects/objects expand into one triple per conjunct;
    coordinated predicates inherit the subject of their chain head. A verb
    with a subject but nothing object-like yields an empty-object triple;
    copular and predicate-adjective clauses yield sub-concept attachments
    (triples flagged `copular`).
    """
    # Predicates with their own subject, then conj-descendants inheriting one.
    predicates: dict[int, list[Token]] = {}
    chain_cop: dict[int, Token] = {}
    for tok in s.tokens:
        own = _own_subjects(tok, s)
        if own:
            expanded: list[Token] = []
            for subj in own:
                expanded.extend(conjunct_chain(subj, s))
            predicates[tok.index] = expanded
            cop = _cop_dep(tok, s)
            if cop is not None:
                chain_cop[tok.index] = cop

    frontier = list(predicates.keys())
    while frontier:
        head_idx = frontier.pop()
        for dep in s.dependents(head_idx):
            if dep.deprel.lower() != "conj" or dep.index in predicates:
                continue
            if not (is_verbal(dep) or is_adjective(dep) or _cop_dep(dep, s) or dep.upos in ("NOUN", "PROPN") and head_idx in chain_cop):
                continue
            own = _own_subjects(dep, s)
            if own:
                expanded = []
                for subj in own:
                    expanded.extend(conjunct_chain(subj, s))
                predicates[dep.index] = expanded
            else:
                predicates[dep.index] = predicates[head_idx]
            cop = _cop_dep(dep, s)
            if cop is not None:
                chain_cop[dep.index] = cop
            elif head_idx in chain_cop:
                chain_cop[dep.index] = chain_cop[head_idx]
            frontier.append(dep.index)

    triples: list[SvoTriple] = []
    for pred_idx in sorted(predicates):
        pred = s.token(pred_idx)
        subjects = [t for t in predicates[pred_idx] if is_nominal(t)]
        if not subjects:
            continue
        triples.extend(_clause_triples(pred, subjects, chain_cop.get(pred_idx), s))
    return triples


def _clause_triples(
    pred: Token, subjects: list[Token], cop: Token | None, s: Sentence
) -> list[SvoTriple]:
    subject_phrases = [concept_phrase(t, s, PhraseKind.SUBJECT) for t in subjects]

    # Predicate adjective: attach under the subject concept, no link.
    if is_adjective(pred):
        group = _VerbGroup()
        if cop is not None:
            group.tokens.append(cop)
            group.lemmas.append(cop)
        else:
            group.lemmas.append(pred)
        link = group.link(detect_polarity(pred, s))
        out = []
        for sp in subject_phrases:
            with_adj = ConceptPhrase(
                head_lemma=sp.head_lemma,
                surface=sp.surface,
                adjectives=sp.adjectives + (pred.lemma,),
                token_index=sp.token_index,
                kind=sp.kind,
            )
            out.append(SvoTriple(with_adj, link, EMPTY_PHRASE, s.seq, copular=True))
        return out

    # Predicate nominal ("Malcolm is a dog"): the nominal is the object.
    if is_nominal(pred) and cop is not None:
        group = _VerbGroup()
        group.add_verb(cop, s)
        link = group.link(detect_polarity(pred, s))
        obj_phrases = [
            concept_phrase(t, s, PhraseKind.OBJECT) for t in conjunct_chain(pred, s)
        ]
        return [
            SvoTriple(sp, link, op, s.seq)
            for sp in subject_phrases
            for op in obj_phrases
        ]

    # Verbal predicate: find objects on the verb or down its xcomp chain.
    group = _VerbGroup()
    group.add_verb(pred, s)
    current = pred
    depth = 0
    while True:
        objects = [d for d in s.dependents(current.index) if is_object_deprel(d.deprel)]
        if objects:
            obj_phrases = []
            for obj in objects:
                for conjunct in conjunct_chain(obj, s):
                    obj_phrases.append(concept_phrase(conjunct, s, PhraseKind.OBJECT))
            link = group.link()
            return [
                SvoTriple(sp, link, op, s.seq)
                for sp in subject_phrases
                for op in obj_phrases
            ]

        adj_complements = [
            d
            for d in s.dependents(current.index)
            if d.deprel.lower() in ("xcomp", "acomp") and is_adjective(d)
        ]
        if adj_complements:
            link = group.link()
            out = []
            for sp in subject_phrases:
                with_adj = ConceptPhrase(
                    head_lemma=sp.head_lemma,
                    surface=sp.surface,
                    adjectives=sp.adjectives + tuple(d.lemma for d in adj_complements),
                    token_index=sp.token_index,
                    kind=sp.kind,
                )
                out.append(SvoTriple(with_adj, link, EMPTY_PHRASE, s.seq, copular=True))
            return out

        obliques = _oblique_objects(current, s)
        if obliques:
            out = []
            for obl_head, prep in obliques:
                obl_group = _VerbGroup(
                    tokens=list(group.tokens),
                    lemmas=list(group.lemmas),
                    trailing=list(group.trailing),
                    negative=group.negative,
                )
                obl_group.add_preposition(prep)
                link = obl_group.link()
                for conjunct in conjunct_chain(obl_head, s):
                    # Folded prepositional material keeps no sub-structure, so
                    # modifiers of oblique heads do not become sub-concepts.
                    op = concept_phrase(conjunct, s, PhraseKind.OBJECT, with_adjectives=False)
                    out.extend(SvoTriple(sp, link, op, s.seq) for sp in subject_phrases)
            return out

        xcomps = [
            d
            for d in s.dependents(current.index)
            if d.deprel.lower() == "xcomp" and is_verbal(d)
        ]
        if xcomps and depth < 3:
            current = xcomps[0]
            group.add_verb(current, s)
            depth += 1
            continue

        link = group.link()
        return [SvoTriple(sp, link, EMPTY_PHRASE, s.seq) for sp in subject_phrases]

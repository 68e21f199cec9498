"""Reading dependency-parsed sentences in CoNLL-U format.

Only the columns the engine consumes are kept: ID, FORM, LEMMA, UPOS,
HEAD, DEPREL. Multiword-token ranges (``1-2``) and empty nodes (``1.1``)
are skipped. Both Universal Dependencies and Stanford-style relation
labels are accepted; `normalize_deprel` folds them onto one canonical set.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Iterator


class ConlluError(ValueError):
    """Malformed CoNLL-U input. Carries the offending 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    index: int  # 1-based position within the sentence
    form: str
    lemma: str
    upos: str
    head: int  # index of governing token, 0 = root
    deprel: str


@dataclass(frozen=True)
class Sentence:
    seq: int  # global 0-based position in the stream
    tokens: tuple[Token, ...]
    raw: str

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    @cached_property
    def _children(self) -> dict[int, tuple[Token, ...]]:
        by_head: dict[int, list[Token]] = {}
        for tok in self.tokens:
            by_head.setdefault(tok.head, []).append(tok)
        return {h: tuple(ts) for h, ts in by_head.items()}

    def dependents(self, head_index: int) -> tuple[Token, ...]:
        """Direct dependents of the token at `head_index`, in sentence order."""
        return self._children.get(head_index, ())

    def roots(self) -> tuple[Token, ...]:
        return self._children.get(0, ())


class Rel(enum.Enum):
    """Canonical relation buckets shared by the UD and Stanford label families."""

    SUBJ = "subj"
    OBJ = "obj"
    AMOD = "amod"
    DET = "det"
    NEG = "neg"
    COORD = "coord"
    OTHER = "other"


_CANONICAL = {
    "nsubj": Rel.SUBJ,
    "nsubjpass": Rel.SUBJ,
    "nsubj:pass": Rel.SUBJ,
    "dobj": Rel.OBJ,
    "obj": Rel.OBJ,
    "amod": Rel.AMOD,
    "det": Rel.DET,
    "neg": Rel.NEG,
    "conj": Rel.COORD,
    "cc": Rel.COORD,
}


def normalize_deprel(label: str) -> Rel:
    """Map a dependency label from either family onto the canonical set.

    Total: unknown labels map to `Rel.OTHER`. Finer distinctions the
    extractor needs (particles, copulas, obliques) are read off the raw
    label instead.
    """
    return _CANONICAL.get(label.lower(), Rel.OTHER)


def _iter_lines(source: str | IO[str] | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        return iter(source.splitlines())
    return iter(source)


def parse_conllu(source: str | IO[str] | Iterable[str]) -> list[Sentence]:
    """Parse CoNLL-U text into Sentences, `seq` assigned in encounter order.

    `source` may be a string, an open text file, or any iterable of lines.
    Raises `ConlluError` with the offending line number on malformed input.
    """
    sentences: list[Sentence] = []
    block: list[tuple[int, str]] = []  # (line_no, line) of token lines
    text_comment: str | None = None

    def flush(end_line: int) -> None:
        nonlocal block, text_comment
        if block:
            sentences.append(_parse_block(block, len(sentences), text_comment, end_line))
        block = []
        text_comment = None

    line_no = 0
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("text") and "=" in body:
                key, value = body.split("=", 1)
                if key.strip() == "text":
                    text_comment = value.strip()
            continue
        block.append((line_no, line))
    flush(line_no)
    return sentences


def _parse_block(
    lines: list[tuple[int, str]],
    seq: int,
    text_comment: str | None,
    end_line: int,
) -> Sentence:
    tokens: list[Token] = []
    for line_no, line in lines:
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        tok_id, form, lemma, upos, _xpos, _feats, head, deprel, _deps, _misc = cols
        if re.fullmatch(r"\d+-\d+", tok_id) or re.fullmatch(r"\d+\.\d+", tok_id):
            continue  # multiword-token range or empty node
        if not tok_id.isdigit():
            raise ConlluError(f"non-numeric token ID {tok_id!r}", line_no)
        if not head.isdigit():
            raise ConlluError(f"non-numeric HEAD {head!r}", line_no)
        index = int(tok_id)
        if index != len(tokens) + 1:
            raise ConlluError(f"token ID {index} breaks 1..n ordering", line_no)
        if not form:
            raise ConlluError("empty FORM", line_no)
        if lemma == "_" or not lemma:
            lemma = form
        head_idx = int(head)
        if head_idx == index:
            raise ConlluError(f"token {index} heads itself", line_no)
        tokens.append(Token(index, form, lemma, upos, head_idx, deprel))

    last_line = lines[-1][0] if lines else end_line
    n = len(tokens)
    for tok in tokens:
        if tok.head > n:
            raise ConlluError(f"HEAD {tok.head} out of range for {n} tokens", last_line)
    if n and not any(tok.head == 0 for tok in tokens):
        raise ConlluError("sentence has no root token", last_line)

    raw = text_comment if text_comment is not None else " ".join(t.form for t in tokens)
    return Sentence(seq=seq, tokens=tuple(tokens), raw=raw)


def to_conllu(sentences: Iterable[Sentence]) -> str:
    """Serialize the kept columns back to CoNLL-U (discarded columns as `_`)."""
    out: list[str] = []
    for sent in sentences:
        out.append(f"# text = {sent.raw}")
        for t in sent.tokens:
            out.append(
                "\t".join(
                    (str(t.index), t.form, t.lemma, t.upos, "_", "_", str(t.head), t.deprel, "_", "_")
                )
            )
        out.append("")
    return "\n".join(out) + ("\n" if out else "")

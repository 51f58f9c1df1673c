"""Boolean attribute policies and their linear secret sharing form.

A policy is a monotone AND/OR formula over attribute strings.  It compiles
to a share-generating matrix (rows plus a row-to-attribute map) via the
standard vector-labeling construction, which yields one row per leaf and
small integer entries.  An attribute set satisfies the policy exactly when
the unit vector (1, 0, ..., 0) lies in the span of the rows it owns;
``find_coefficients`` recovers the combination deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .group_math import Scalar, RandomTape, EncodingError
from ._bn254 import order as _ORDER
from . import encoding

__all__ = [
    "Leaf", "And", "Or", "PolicyFormula", "PolicySyntaxError",
    "LsssMatrix", "ShareVector", "ReconstructionCoefficients",
    "parse_policy", "policy_attributes", "evaluate", "to_lsss",
    "share_secret", "find_coefficients",
]


class PolicySyntaxError(ValueError):
    """Policy text failed to parse; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Leaf:
    attribute: str


@dataclass(frozen=True)
class And:
    left: "PolicyFormula"
    right: "PolicyFormula"


@dataclass(frozen=True)
class Or:
    left: "PolicyFormula"
    right: "PolicyFormula"


PolicyFormula = Union[Leaf, And, Or]


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            tokens.append((c, i))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()":
            j += 1
        word = text[i:j]
        if word.upper() in ("AND", "OR"):
            tokens.append((word.upper(), i))
        else:
            tokens.append(("ATTR", i, word))
        i = j
    return tokens


def parse_policy(text: str) -> PolicyFormula:
    """Parse infix policy text; AND binds tighter than OR."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def parse_or():
        nonlocal pos
        node = parse_and()
        while peek() and peek()[0] == "OR":
            pos += 1
            node = Or(node, parse_and())
        return node

    def parse_and():
        nonlocal pos
        node = parse_atom()
        while peek() and peek()[0] == "AND":
            pos += 1
            node = And(node, parse_atom())
        return node

    def parse_atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise PolicySyntaxError("unexpected end of policy", len(text))
        if tok[0] == "(":
            pos += 1
            node = parse_or()
            closing = peek()
            if closing is None or closing[0] != ")":
                raise PolicySyntaxError("missing closing parenthesis",
                                        closing[1] if closing else len(text))
            pos += 1
            return node
        if tok[0] == "ATTR":
            pos += 1
            return Leaf(tok[2])
        raise PolicySyntaxError(f"unexpected token {tok[0]!r}", tok[1])

    if not tokens:
        raise PolicySyntaxError("empty policy", 0)
    node = parse_or()
    if pos != len(tokens):
        raise PolicySyntaxError(f"unexpected token {tokens[pos][0]!r}", tokens[pos][1])
    return node


def policy_attributes(f: PolicyFormula) -> frozenset[str]:
    if isinstance(f, Leaf):
        return frozenset([f.attribute])
    return policy_attributes(f.left) | policy_attributes(f.right)


def evaluate(f: PolicyFormula, attrs) -> bool:
    """Plain boolean evaluation; the independent oracle for satisfiability."""
    if isinstance(f, Leaf):
        return f.attribute in attrs
    if isinstance(f, And):
        return evaluate(f.left, attrs) and evaluate(f.right, attrs)
    return evaluate(f.left, attrs) or evaluate(f.right, attrs)


@dataclass(frozen=True)
class LsssMatrix:
    """Share-generating matrix: l rows of width n plus the row->attribute map."""

    rows: tuple  # tuple of tuples of Scalar
    rho: tuple   # tuple of attribute strings, one per row

    def __post_init__(self):
        if not self.rows or len(self.rows) != len(self.rho):
            raise ValueError("matrix rows and rho must be non-empty and aligned")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def to_canonical_bytes(self) -> bytes:
        out = [encoding.encode_u32(self.n_rows), encoding.encode_u32(self.n_cols)]
        for row in self.rows:
            out.extend(c.to_canonical_bytes() for c in row)
        out.extend(encoding.encode_str(a) for a in self.rho)
        return b"".join(out)

    @classmethod
    def from_canonical(cls, reader) -> "LsssMatrix":
        l = reader.take_u32()
        n = reader.take_u32()
        if l == 0 or n == 0:
            raise EncodingError("empty LSSS matrix")
        rows = tuple(tuple(Scalar.from_canonical(reader) for _ in range(n))
                     for _ in range(l))
        rho = tuple(reader.take_str() for _ in range(l))
        if any(not a for a in rho):
            raise EncodingError("empty attribute name in rho")
        return cls(rows, rho)


@dataclass(frozen=True)
class ShareVector:
    """Shares lambda_i = v . M_i for v = (s, y_2, ..., y_n)."""

    shares: tuple      # one Scalar per matrix row
    secret: Scalar
    blinding: tuple    # y_2 .. y_n


@dataclass(frozen=True)
class ReconstructionCoefficients:
    """Map row index -> omega_i with sum omega_i M_i = (1, 0, ..., 0)."""

    entries: dict

    def row_indices(self) -> list[int]:
        return sorted(self.entries)

    def to_canonical_bytes(self) -> bytes:
        out = [encoding.encode_u32(len(self.entries))]
        for i in sorted(self.entries):
            out.append(encoding.encode_u32(i))
            out.append(self.entries[i].to_canonical_bytes())
        return b"".join(out)

    @classmethod
    def from_canonical(cls, reader) -> "ReconstructionCoefficients":
        count = reader.take_u32()
        entries = {}
        last = -1
        for _ in range(count):
            i = reader.take_u32()
            if i <= last:
                raise EncodingError("coefficient rows not in canonical order")
            last = i
            entries[i] = Scalar.from_canonical(reader)
        return cls(entries)


def to_lsss(f: PolicyFormula) -> LsssMatrix:
    """Compile a formula to its share-generating matrix.

    Vector labeling: the root carries (1); an OR passes its vector to both
    children; an AND gives one child the vector extended with 1 and the
    other a fresh (0, ..., 0, -1).  Row order is leaf order, left to right.
    """
    leaves = []
    counter = 1

    def label(node, vector):
        nonlocal counter
        if isinstance(node, Leaf):
            if not node.attribute:
                raise ValueError("empty attribute name")
            leaves.append((node.attribute, vector))
        elif isinstance(node, Or):
            label(node.left, vector)
            label(node.right, vector)
        else:
            pos = counter  # this AND's fresh column, claimed before recursing
            counter += 1
            padded = vector + [0] * (pos - len(vector))
            label(node.left, padded + [1])
            label(node.right, [0] * pos + [-1])

    label(f, [1])
    rows = tuple(tuple(Scalar(c) for c in vec + [0] * (counter - len(vec)))
                 for _, vec in leaves)
    rho = tuple(attr for attr, _ in leaves)
    return LsssMatrix(rows, rho)


def share_secret(m: LsssMatrix, s: Scalar, tape: RandomTape) -> ShareVector:
    """Split s into per-row shares with fresh blinding drawn from the tape."""
    blinding = tuple(tape.draw_scalar() for _ in range(m.n_cols - 1))
    v = (s,) + blinding
    shares = tuple(
        sum((vj * mij for vj, mij in zip(v, row)), Scalar(0))
        for row in m.rows
    )
    return ShareVector(shares, s, blinding)


def find_coefficients(m: LsssMatrix, attrs) -> Optional[ReconstructionCoefficients]:
    """Solve sum omega_i M_i = (1, 0, ..., 0) over rows owned by attrs.

    Gaussian elimination over Z_p; candidate rows are scanned in ascending
    row index so ties break toward the smallest index and the result is
    deterministic.  Returns None when the set does not satisfy the policy.
    """
    selected = [i for i in range(m.n_rows) if m.rho[i] in attrs]
    if not selected:
        return None

    n = m.n_cols
    k = len(selected)
    # augmented system A w = e1, columns of A are the selected rows
    aug = [[m.rows[i][r].value for i in selected] + [1 if r == 0 else 0]
           for r in range(n)]
    p = int(_ORDER)

    pivot_of_col = {}
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if aug[r][col] % p != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [x * inv % p for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] % p != 0:
                factor = aug[r][col]
                aug[r] = [(x - factor * y) % p for x, y in zip(aug[r], aug[row])]
        pivot_of_col[col] = row
        row += 1

    # consistency: remaining rows must have zero target
    for r in range(row, n):
        if aug[r][k] % p != 0:
            return None

    entries = {}
    for col, prow in pivot_of_col.items():
        value = aug[prow][k] % p
        if value != 0:
            entries[selected[col]] = Scalar(value)
    if not entries:
        return None
    return ReconstructionCoefficients(entries)

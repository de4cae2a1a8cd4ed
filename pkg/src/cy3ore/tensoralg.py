"""Exact arithmetic in the free (tensor) algebra on a finite alphabet.

Words are tuples of generator indices, polynomials are finite maps
word -> Fraction with no stored zeros.  All generators sit in degree 1,
so the degree of a word is its length.  Everything here is pure and
immutable; the rest of the package builds on these primitives plus the
exact linear algebra at the bottom of the module (fraction-free Bareiss
elimination, and a modular rank routine for large graded pieces).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

Word = tuple  # tuple[int, ...]
Scalar = Fraction  # all coefficients are exact rationals


class AlphabetMismatch(ValueError):
    """Operands live over different generator sets."""


class DegreeError(ValueError):
    """Input violates a homogeneity or degree requirement."""


def frac(x) -> Fraction:
    """Coerce int / str / Fraction to Fraction (exact, never float)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(x)


def word_key(w: Word):
    """Degree-lexicographic sort key; later generator indices are larger."""
    return (len(w), w)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered alphabet of degree-one generators.

    ``z_index`` marks the distinguished Ore variable when present.  The
    ordering is total and fixed; the Ore variable is always stored last
    so plain tuple comparison realises deglex with z greatest.
    """

    names: tuple
    z_index: Optional[int] = None

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        if self.z_index is not None and not 0 <= self.z_index < len(self.names):
            raise ValueError("z_index out of range")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def gen(self, i: int) -> "NcPoly":
        """The i-th generator as a polynomial."""
        return NcPoly(self, {(i,): Fraction(1)})

    def one(self) -> "NcPoly":
        return NcPoly(self, {(): Fraction(1)})

    def zero(self) -> "NcPoly":
        return NcPoly(self, {})

    def with_ore_variable(self, name: str = "z") -> "GeneratorSet":
        """Extend by a distinguished variable appended after the others."""
        if self.z_index is not None:
            raise ValueError("alphabet already has an Ore variable")
        while name in self.names:
            name = name + "'"
        return GeneratorSet(self.names + (name,), z_index=self.n)


def _same_alphabet(a: GeneratorSet, b: GeneratorSet):
    if a.names != b.names:
        raise AlphabetMismatch(f"alphabets differ: {a.names} vs {b.names}")


class NcPoly:
    """Exact-rational linear combination of words, the tensor algebra element.

    Instances are treated as immutable; all operators return new values.
    Term iteration is sorted by (degree, word) so reports and matrices
    are reproducible.
    """

    __slots__ = ("gens", "_terms")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Word, Fraction]):
        clean = {}
        for w, c in terms.items():
            c = frac(c)
            if c:
                clean[tuple(w)] = c
        self.gens = gens
        self._terms = clean

    @classmethod
    def from_terms(cls, gens: GeneratorSet, terms: Mapping[Word, Fraction]) -> "NcPoly":
        """Validating constructor; checks every letter against the alphabet."""
        for w in terms:
            for letter in w:
                if not 0 <= letter < gens.n:
                    raise ValueError(f"letter {letter} outside alphabet of size {gens.n}")
        return cls(gens, terms)

    # -- queries ---------------------------------------------------------

    def terms(self):
        return sorted(self._terms.items(), key=lambda kv: word_key(kv[0]))

    def words(self):
        return sorted(self._terms, key=word_key)

    def coefficient(self, w: Word) -> Fraction:
        return self._terms.get(tuple(w), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def homogeneous_degree(self) -> Optional[int]:
        """Common degree of all stored words, or None (zero or inhomogeneous)."""
        degs = {len(w) for w in self._terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self._terms}) <= 1

    def with_alphabet(self, gens: GeneratorSet) -> "NcPoly":
        """Reinterpret over a larger alphabet sharing a common name prefix."""
        if gens.names[: self.gens.n] != self.gens.names:
            raise AlphabetMismatch("target alphabet does not extend the source")
        return NcPoly(gens, self._terms)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "NcPoly") -> "NcPoly":
        _same_alphabet(self.gens, other.gens)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return NcPoly(self.gens, out)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def __neg__(self) -> "NcPoly":
        return NcPoly(self.gens, {w: -c for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            _same_alphabet(self.gens, other.gens)
            out = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, Fraction(0)) + c1 * c2
            return NcPoly(self.gens, out)
        c = frac(other)
        return NcPoly(self.gens, {w: c0 * c for w, c0 in self._terms.items()})

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return self * (Fraction(1) / frac(other))

    def __pow__(self, k: int) -> "NcPoly":
        out = self.gens.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NcPoly)
            and self.gens.names == other.gens.names
            and self._terms == other._terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"NcPoly({format_poly(self)})"


def format_poly(p: NcPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for w, c in p.terms():
        word = "*".join(p.gens.names[i] for i in w) if w else "1"
        if c == 1 and w:
            term = word
        elif c == -1 and w:
            term = f"-{word}"
        else:
            term = f"{c}" if not w else f"{c}*{word}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def nc_mul(p: NcPoly, q: NcPoly) -> NcPoly:
    """Tensor-algebra product: bilinear extension of word concatenation."""
    return p * q


def coefficient_of(p: NcPoly, w: Word) -> Fraction:
    return p.coefficient(w)


def apply_left_functional(alpha: int, p: NcPoly) -> NcPoly:
    """Contract the leading tensor slot against the dual basis vector alpha.

    Keeps words starting with generator ``alpha`` and strips that letter.
    """
    if not p.is_homogeneous():
        raise DegreeError("left functional needs a homogeneous input")
    out = {}
    for w, c in p._terms.items():
        if w and w[0] == alpha:
            out[w[1:]] = out.get(w[1:], Fraction(0)) + c
    return NcPoly(p.gens, out)


def apply_right_functional(p: NcPoly, alpha: int) -> NcPoly:
    """Mirror of :func:`apply_left_functional` on the trailing slot."""
    if not p.is_homogeneous():
        raise DegreeError("right functional needs a homogeneous input")
    out = {}
    for w, c in p._terms.items():
        if w and w[-1] == alpha:
            out[w[:-1]] = out.get(w[:-1], Fraction(0)) + c
    return NcPoly(p.gens, out)


def apply_linear_substitution(p: NcPoly, P: Sequence[Sequence[Fraction]]) -> NcPoly:
    """Substitute x_j -> sum_i P[j][i] x_i in every word of ``p``.

    This is the algebra endomorphism induced by the rows of ``P``; it sends
    the quadratic relation of a matrix M to the relation of P^t M P.
    """
    n = p.gens.n
    if len(P) != n or any(len(row) != n for row in P):
        raise ValueError("substitution matrix size does not match alphabet")
    images = [
        NcPoly(p.gens, {(i,): frac(P[j][i]) for i in range(n)}) for j in range(n)
    ]
    out = p.gens.zero()
    for w, c in p._terms.items():
        term = p.gens.one() * c
        for letter in w:
            term = term * images[letter]
        out = out + term
    return out


def words_of_degree(gens: GeneratorSet, k: int):
    """All words of degree k in ascending lexicographic order."""
    return [tuple(w) for w in itertools.product(range(gens.n), repeat=k)]


def graded_matrix(gens: GeneratorSet, map_spec, out_degree: int):
    """Matrix of a linear map into the degree ``out_degree`` graded piece.

    ``map_spec`` lists (input basis word, image polynomial) pairs; the
    columns follow that order and the rows run over all words of the
    output degree.  Images must be homogeneous of the output degree or
    zero.
    """
    rows = words_of_degree(gens, out_degree)
    index = {w: i for i, w in enumerate(rows)}
    mat = [[Fraction(0)] * len(map_spec) for _ in rows]
    for j, (_, image) in enumerate(map_spec):
        if image.is_zero():
            continue
        d = image.homogeneous_degree()
        if d != out_degree:
            raise DegreeError(f"image degree {d} inconsistent with target degree {out_degree}")
        for w, c in image._terms.items():
            mat[index[w]][j] = c
    return mat


# -- exact linear algebra --------------------------------------------------


@dataclass(frozen=True)
class SolveResult:
    """Rank plus, when a right-hand side was given, a solution or an
    inconsistency certificate y with y^t A = 0 and y^t b != 0."""

    rank: int
    solution: Optional[tuple] = None
    certificate: Optional[tuple] = None

    @property
    def consistent(self) -> bool:
        return self.certificate is None


def _scaled_int_rows(rows, extra=None):
    """Clear denominators row by row; returns int rows and the row scales."""
    out, scales = [], []
    for i, row in enumerate(rows):
        vals = [frac(x) for x in row]
        if extra is not None:
            vals.append(frac(extra[i]))
        lcm = 1
        for v in vals:
            lcm = lcm * v.denominator // _gcd(lcm, v.denominator)
        out.append([int(v * lcm) for v in vals])
        scales.append(lcm)
    return out, scales


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def exact_rank(rows) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    if not rows or not rows[0]:
        return 0
    A, _ = _scaled_int_rows(rows)
    m, n = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p, ar = A[rank][col], A[rank]
        for i in range(rank + 1, m):
            ai = A[i]
            f = ai[col]
            for j in range(col + 1, n):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rank_and_solve(rows, b=None) -> SolveResult:
    """Fraction-free elimination with optional exact solve.

    With ``b`` given, returns one exact solution (free variables zero) or
    an inconsistency certificate extracted from the tracked row operations.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if b is not None and len(b) != m:
        raise ValueError("right-hand side length does not match row count")
    if m == 0 or n == 0:
        if b is not None and any(frac(x) for x in (b or [])):
            bad = next(i for i, x in enumerate(b) if frac(x))
            cert = [Fraction(0)] * m
            cert[bad] = Fraction(1)
            return SolveResult(0, None, tuple(cert))
        return SolveResult(0, tuple([Fraction(0)] * n) if b is not None else None)

    A, scales = _scaled_int_rows(rows, extra=b)
    width = n + (1 if b is not None else 0)
    for i in range(m):  # track row operations in an identity block
        A[i].extend(1 if j == i else 0 for j in range(m))
    pivots = []
    rank, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p, ar = A[rank][col], A[rank]
        for i in range(rank + 1, m):
            ai = A[i]
            f = ai[col]
            for j in range(col + 1, width + m):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[col] = 0
        prev = p
        pivots.append((rank, col))
        rank += 1
        if rank == m:
            break
    if b is None:
        return SolveResult(rank)
    for i in range(rank, m):
        if A[i][n]:
            cert = tuple(Fraction(A[i][width + j]) * scales[j] for j in range(m))
            return SolveResult(rank, None, cert)
    x = [Fraction(0)] * n
    for row, col in reversed(pivots):
        s = Fraction(A[row][n])
        for j in range(col + 1, n):
            s -= Fraction(A[row][j]) * x[j]
        x[col] = s / A[row][col]
    return SolveResult(rank, tuple(x))


def rank_mod_p(rows, p: int, shape=None) -> int:
    """Rank over GF(p) via vectorised elimination.

    ``rows`` may be dense Fraction rows or a sparse dict (i, j) -> Fraction
    together with an explicit ``shape``.  Raises ValueError when some
    denominator vanishes mod p; callers retry with another prime.
    """
    if isinstance(rows, dict):
        m, n = shape
        M = np.zeros((m, n), dtype=np.int64)
        for (i, j), v in rows.items():
            v = frac(v)
            den = v.denominator % p
            if den == 0:
                raise ValueError("denominator divisible by modulus")
            M[i, j] = (v.numerator % p) * pow(den, p - 2, p) % p
    else:
        m = len(rows)
        n = len(rows[0]) if m else 0
        M = np.zeros((m, n), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                v = frac(x)
                den = v.denominator % p
                if den == 0:
                    raise ValueError("denominator divisible by modulus")
                M[i, j] = (v.numerator % p) * pow(den, p - 2, p) % p
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(M[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, col]), p - 2, p)
        M[rank, col:] = M[rank, col:] * inv % p
        mult = M[rank + 1 :, col]
        hot = np.nonzero(mult)[0]
        if hot.size:
            block = M[rank + 1 :, col:]
            block[hot] = (block[hot] - np.outer(mult[hot], M[rank, col:])) % p
        rank += 1
    return rank


# -- small dense helpers ----------------------------------------------------


def identity_matrix(n: int):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if A and B and len(A[0]) != len(B):
        raise ValueError("matrix dimensions do not match")
    cols = len(B[0]) if B else 0
    return [
        [sum((frac(A[i][k]) * frac(B[k][j]) for k in range(len(B))), Fraction(0)) for j in range(cols)]
        for i in range(len(A))
    ]


def mat_transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def mat_vec(A, v):
    return [sum((frac(A[i][k]) * frac(v[k]) for k in range(len(v))), Fraction(0)) for i in range(len(A))]


def mat_inverse(A):
    """Exact inverse by Gauss-Jordan; raises on singular input."""
    n = len(A)
    W = [[frac(x) for x in row] + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if W[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        W[col], W[piv] = W[piv], W[col]
        d = W[col][col]
        W[col] = [x / d for x in W[col]]
        for i in range(n):
            if i != col and W[i][col]:
                f = W[i][col]
                W[i] = [a - f * b for a, b in zip(W[i], W[col])]
    return [row[n:] for row in W]

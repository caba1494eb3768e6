"""Prime-field arithmetic, polynomials over Z_q, and CRT reconstruction.

Residues are plain Python ints in ``[0, q)``; the hot loops live in
:mod:`camelot.kernels`. :class:`FieldElement` exists for the public API and
for tests that want operator syntax; internal code passes ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

MAX_MODULUS = 1 << 62

# Deterministic Miller-Rabin: these bases are exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ContractError(AssertionError):
    """A caller broke an arithmetic precondition (mixed moduli, division by zero)."""


class ModulusTooSmall(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Modulus(int):
    """A prime modulus below 2^62."""

    def __new__(cls, q: int):
        q = int(q)
        if not 2 <= q < MAX_MODULUS:
            raise ValueError(f"modulus {q} outside [2, 2^62)")
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        return super().__new__(cls, q)

    def __repr__(self):
        return f"Modulus({int(self)})"

    def element(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self, self)


def find_prime(lower_bound: int) -> Modulus:
    """Smallest prime >= ``lower_bound``."""
    if lower_bound >= MAX_MODULUS:
        raise OverflowError(f"prime search bound {lower_bound} exceeds 2^62")
    n = max(2, int(lower_bound))
    if n > 2 and n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 1 if n == 2 else 2
    if n >= MAX_MODULUS:
        raise OverflowError("no prime below 2^62 above the bound")
    return Modulus(n)


def primes_from(lower_bound: int, count: int) -> list[Modulus]:
    out = []
    n = lower_bound
    for _ in range(count):
        p = find_prime(n)
        out.append(p)
        n = p + 1
    return out


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: Modulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a residue mod {self.modulus}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ContractError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        return int(other) % self.modulus

    def _new(self, v: int) -> "FieldElement":
        return FieldElement(v % self.modulus, self.modulus)

    def __add__(self, other):
        return self._new(self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.value - self._other(other))

    def __rsub__(self, other):
        return self._new(self._other(other) - self.value)

    def __mul__(self, other):
        return self._new(self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ContractError("division by zero in Z_q")
        return self._new(pow(self.value, self.modulus - 2, self.modulus))

    def __truediv__(self, other):
        o = self._other(other)
        if o == 0:
            raise ContractError("division by zero in Z_q")
        return self._new(self.value * pow(o, self.modulus - 2, self.modulus))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.value, e, self.modulus))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, int(self.modulus)))

    def __repr__(self):
        return f"{self.value} (mod {int(self.modulus)})"


def _residue(x, q: int) -> int:
    if isinstance(x, FieldElement):
        if x.modulus != q:
            raise ContractError(f"modulus mismatch: {x.modulus} vs {q}")
        return x.value
    return int(x) % q


class Poly:
    """Univariate polynomial over Z_q; ``coeffs[j]`` multiplies x^j.

    Trailing zeros are stripped, so the zero polynomial has no coefficients
    and degree -1.
    """

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs: Iterable[int], q: int):
        q = int(q)
        c = [int(v) % q for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self.q = q

    @classmethod
    def from_array(cls, arr, q: int) -> "Poly":
        return cls(np.asarray(arr, dtype=np.uint64).tolist(), q)

    def to_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.uint64)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "Poly"):
        if other.q != self.q:
            raise ContractError(f"modulus mismatch: {self.q} vs {other.q}")

    def __call__(self, x) -> int:
        return kernels.horner(self.to_array(), _residue(x, self.q), self.q) if self.coeffs else 0

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly((x + y for x, y in zip(a, b)), self.q)

    def __neg__(self) -> "Poly":
        return Poly((-c for c in self.coeffs), self.q)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = _residue(other, self.q)
            return Poly((c * s for c in self.coeffs), self.q)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly((), self.q)
        return Poly.from_array(kernels.poly_mul(self.to_array(), other.to_array(), self.q), self.q)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        self._check(other)
        if other.is_zero():
            raise ContractError("polynomial division by zero")
        quot, rem = kernels.poly_divmod(self.to_array(), other.to_array(), self.q)
        return Poly.from_array(quot, self.q), Poly.from_array(rem, self.q)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.q))

    def __repr__(self):
        return f"Poly({list(self.coeffs)}, q={self.q})"


def poly_eval(p: Poly, x0) -> FieldElement:
    """Horner evaluation of ``p`` at ``x0``."""
    return FieldElement(p(x0), Modulus(p.q))


def poly_from_roots(roots: Sequence[int], q: int) -> Poly:
    """prod (x - r) built as a balanced product tree."""
    layer = [np.array([(-int(r)) % q, 1], dtype=np.uint64) for r in roots]
    if not layer:
        return Poly([1], q)
    while len(layer) > 1:
        nxt = [kernels.poly_mul(layer[i], layer[i + 1], q) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return Poly.from_array(layer[0], q)


def poly_interpolate(points: Sequence, values: Sequence, q: int | None = None) -> Poly:
    """The unique polynomial of degree < len(points) through the given pairs."""
    if q is None:
        q = _infer_modulus(list(points) + list(values))
    xs = [_residue(x, q) for x in points]
    ys = [_residue(y, q) for y in values]
    if len(xs) != len(ys) or not xs:
        raise ValueError("need matching, nonempty point and value lists")
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation points must be distinct")
    return Poly.from_array(kernels.interpolate(xs, ys, q), q)


def _infer_modulus(items) -> int:
    for it in items:
        if isinstance(it, FieldElement):
            return int(it.modulus)
    raise ValueError("modulus not given and no FieldElement to infer it from")


def lagrange_basis_at(R: int, x0, q: int | None = None) -> list[FieldElement]:
    """Values of the Lagrange basis for nodes 1..R at ``x0``.

    Runs in O(R) field operations via factorials and a single batched
    inversion.
    """
    if q is None:
        q = _infer_modulus([x0])
    if q <= R:
        raise ModulusTooSmall(f"need q > R, got q={q}, R={R}")
    m = Modulus(q)
    vals = kernels.lagrange_basis(R, _residue(x0, q), q)
    return [FieldElement(int(v), m) for v in vals]


def crt_combine(residues: Iterable[tuple[int, int]]) -> int:
    """Unique representative in [0, prod q) of the given residues."""
    seen: dict[int, int] = {}
    for value, q in residues:
        q = int(q)
        v = int(value) % q
        if q in seen and seen[q] != v:
            raise ValueError(f"inconsistent residues for modulus {q}")
        seen[q] = v
    x, M = 0, 1
    for q, v in seen.items():
        # x = v mod q while keeping x mod M
        t = ((v - x) * pow(M, -1, q)) % q
        x += M * t
        M *= q
    return x


def crt_signed(residues: Iterable[tuple[int, int]]) -> int:
    """CRT recentered into (-M/2, M/2]."""
    residues = list(residues)
    x = crt_combine(residues)
    M = 1
    for q in {int(q) for _, q in residues}:
        M *= q
    return x - M if x > M // 2 else x


class BiPoly:
    """Polynomial in w_E, w_B over Z_q with degrees capped at (dE, dB)."""

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs, q: int):
        arr = np.asarray(coeffs, dtype=np.uint64)
        if arr.ndim != 2:
            raise ValueError("bivariate coefficients must be a 2-D array")
        self.coeffs = arr
        self.q = int(q)

    @classmethod
    def zero(cls, bounds: tuple[int, int], q: int) -> "BiPoly":
        return cls(np.zeros((bounds[0] + 1, bounds[1] + 1), dtype=np.uint64), q)

    @classmethod
    def monomial(cls, bounds, q, iE: int, iB: int, c: int = 1) -> "BiPoly":
        p = cls.zero(bounds, q)
        if iE <= bounds[0] and iB <= bounds[1]:
            p.coeffs[iE, iB] = int(c) % q
        return p

    @property
    def bounds(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    def __getitem__(self, idx):
        return int(self.coeffs[idx])

    def __add__(self, other: "BiPoly") -> "BiPoly":
        if other.q != self.q:
            raise ContractError("modulus mismatch")
        s = (self.coeffs.astype(object) + other.coeffs.astype(object)) % self.q
        return BiPoly(s.astype(np.uint64), self.q)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        terms = [f"{int(c)}*wE^{i}*wB^{j}" for (i, j), c in np.ndenumerate(self.coeffs) if c]
        return f"BiPoly({' + '.join(terms) or '0'}, q={self.q})"


def _resize(arr: np.ndarray, bounds) -> np.ndarray:
    out = np.zeros((bounds[0] + 1, bounds[1] + 1), dtype=np.uint64)
    r = min(arr.shape[0], bounds[0] + 1)
    c = min(arr.shape[1], bounds[1] + 1)
    out[:r, :c] = arr[:r, :c]
    return out


def bipoly_mul_trunc(a: BiPoly, b: BiPoly, bounds: tuple[int, int]) -> BiPoly:
    """a*b with every term beyond ``bounds`` dropped."""
    if a.q != b.q:
        raise ContractError("modulus mismatch")
    return BiPoly(kernels.bipoly_mul(_resize(a.coeffs, bounds), _resize(b.coeffs, bounds), a.q), a.q)

"""Nonsystematic Reed-Solomon encoding and Gao decoding over Z_q."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .field import Poly, _residue, poly_from_roots


@dataclass(frozen=True)
class CodewordShare:
    point: int
    value: int
    origin: int | str = "external"


@dataclass(frozen=True)
class DecodeResult:
    proof: Poly
    error_points: frozenset


class DecodeFailure(Exception):
    pass


def rs_encode(p: Poly, points: Sequence, origin: int | str = "external") -> list[CodewordShare]:
    xs = [_residue(x, p.q) for x in points]
    if len(set(xs)) != len(xs):
        raise ValueError("encoding points must be distinct")
    if p.degree >= len(xs):
        raise ValueError("need more points than the polynomial degree")
    if p.is_zero():
        return [CodewordShare(x, 0, origin) for x in xs]
    vals = kernels.horner_many(p.to_array(), np.array(xs, dtype=np.uint64), p.q)
    return [CodewordShare(x, int(v), origin) for x, v in zip(xs, vals)]


def _trim(a: np.ndarray) -> np.ndarray:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _sub(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    n = max(len(a), len(b))
    x = np.zeros(n, dtype=object)
    x[: len(a)] += a.astype(object)
    x[: len(b)] -= b.astype(object)
    return _trim((x % q).astype(np.uint64))


def _mul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    if not len(a) or not len(b):
        return np.zeros(0, dtype=np.uint64)
    return _trim(kernels.poly_mul(a, b, q))


def gao_decode(received: Sequence[CodewordShare], d: int, q: int) -> DecodeResult:
    """Decode a received word to a polynomial of degree <= d.

    Shares are the received subset only; absent points simply shrink e.
    Raises :class:`DecodeFailure` when more than floor((e-d-1)/2) values
    are wrong (as far as the decoder can tell).
    """
    xs = [_residue(s.point, q) for s in received]
    ys = [_residue(s.value, q) for s in received]
    e = len(xs)
    if len(set(xs)) != e:
        raise ValueError("received word has duplicate points")
    if e < d + 1:
        raise DecodeFailure(f"only {e} shares for degree {d}")

    g0 = poly_from_roots(xs, q).to_array()
    g1 = _trim(kernels.interpolate(xs, ys, q))

    # partial extended Euclid on (g0, g1); u*g0 + v*g1 = r throughout
    stop = (e + d + 1) / 2
    r0, r1 = g0, g1
    u0, u1 = np.array([1], dtype=np.uint64), np.zeros(0, dtype=np.uint64)
    v0, v1 = np.zeros(0, dtype=np.uint64), np.array([1], dtype=np.uint64)
    while len(r1) - 1 >= stop:
        quo, rem = kernels.poly_divmod(r0, r1, q)
        quo = _trim(quo)
        r0, r1 = r1, _trim(rem)
        u0, u1 = u1, _sub(u0, _mul(quo, u1, q), q)
        v0, v1 = v1, _sub(v0, _mul(quo, v1, q), q)

    if not len(v1):
        raise DecodeFailure("degenerate Bezout coefficient")
    if not len(r1):
        proof = Poly((), q)
    else:
        quo, rem = kernels.poly_divmod(r1, v1, q)
        if len(_trim(rem)):
            raise DecodeFailure("nonzero remainder in G / V")
        proof = Poly.from_array(quo, q)
    if proof.degree > d:
        raise DecodeFailure(f"decoded degree {proof.degree} exceeds {d}")

    if proof.is_zero():
        got = [0] * e
    else:
        got = kernels.horner_many(proof.to_array(), np.array(xs, dtype=np.uint64), q).tolist()
    errors = frozenset(x for x, y, g in zip(xs, ys, got) if int(g) != y)
    if len(errors) > (e - d - 1) // 2:
        raise DecodeFailure(f"{len(errors)} disagreements exceed the correction radius")
    return DecodeResult(proof, errors)

"""Dense univariate polynomials over either scalar backend.

Coefficients are stored low-to-high.  A polynomial is *exact* when all of
its coefficients are ``ExactComplex`` and *approximate* when they are
``complex``; mixed input is promoted to approximate.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DuplicateNode, ZeroPolynomial
from .scalars import (
    ZERO,
    ExactComplex,
    format_scalar,
    is_exact,
    parse_scalar,
    to_exact,
)


def _normalize_coeffs(coeffs):
    coeffs = list(coeffs)
    if all(is_exact(c) for c in coeffs):
        coeffs = [ExactComplex.coerce(c) for c in coeffs]
        exact = True
    else:
        coeffs = [complex(c) for c in coeffs]
        exact = False
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs), exact


class Polynomial:
    """Immutable polynomial ``a_0 + a_1 z + ... + a_d z^d``."""

    __slots__ = ("coeffs", "exact", "_approx")

    def __init__(self, coeffs=(), exact=None):
        c, ex = _normalize_coeffs(coeffs)
        if exact is False and ex:
            c = tuple(complex(v) for v in c)
            ex = False
        elif exact is True and not ex:
            c = tuple(to_exact(v) for v in c)
            ex = True
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "exact", ex)
        object.__setattr__(self, "_approx", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def parse(cls, text: str, exact: bool | None = None) -> "Polynomial":
        """Parse comma separated low-to-high coefficients, e.g. ``"-1,0,1"``."""
        parts = [p for p in str(text).split(",")]
        if not any(p.strip() for p in parts):
            return cls((), exact=bool(exact) if exact is not None else True)
        values = [parse_scalar(p, exact) for p in parts]
        if exact is None and not all(is_exact(v) for v in values):
            values = [complex(v) for v in values]
        return cls(values)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls([0, 1])

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        return ",".join(format_scalar(c) for c in self.coeffs)

    __str__ = format

    def __repr__(self):
        return f"Polynomial({self.format()!r})"

    # -- basic properties ---------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports 0 (check ``is_zero``)."""
        return max(len(self.coeffs) - 1, 0)

    @property
    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _zero(self):
        return ZERO if self.exact else 0j

    def approx(self) -> "Polynomial":
        if not self.exact:
            return self
        if self._approx is None:
            object.__setattr__(self, "_approx", Polynomial([complex(c) for c in self.coeffs]))
        return self._approx

    def to_exact(self) -> "Polynomial":
        return self if self.exact else Polynomial([to_exact(c) for c in self.coeffs])

    def numpy_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z):
        coeffs = self.coeffs
        if self.exact and not is_exact(z):
            coeffs = self.approx().coeffs
        if not coeffs:
            return ZERO if is_exact(z) else 0j
        acc = coeffs[-1]
        for a in reversed(coeffs[:-1]):
            acc = acc * z + a
        return acc

    def evaluate_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized Horner in complex128."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in reversed(self.approx().coeffs):
            acc = acc * z + a
        return acc

    def taylor(self, z):
        """Return ``[P(z), P'(z), P''(z)/2!, ..., P^(d)(z)/d!]`` by repeated synthetic division."""
        coeffs = self.coeffs
        if self.exact and not is_exact(z):
            coeffs = self.approx().coeffs
        work = list(coeffs)
        n = len(work)
        out = []
        for k in range(n):
            for i in range(n - 2, k - 1, -1):
                work[i] = work[i] + z * work[i + 1]
            out.append(work[k])
        return out

    def derivative(self, k: int = 1) -> "Polynomial":
        if k < 1:
            raise ValueError("derivative order must be >= 1")
        coeffs = list(self.coeffs)
        for _ in range(k):
            coeffs = [c * i for i, c in enumerate(coeffs)][1:]
        return Polynomial(coeffs, exact=self.exact)

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero or other.is_zero:
            return Polynomial((), exact=self.exact and other.exact)
        out = [self._zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Polynomial([1], exact=self.exact)
        for _ in range(n):
            result = result * self
        return result

    def divmod(self, other: "Polynomial"):
        """Euclidean division over a field (exact or approximate)."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        quot = [self._zero()] * max(len(rem) - dd, 1)
        while len(rem) - 1 >= dd and rem:
            shift = len(rem) - 1 - dd
            c = rem[-1] / lead
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Polynomial(quot), Polynomial(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        lead = self.leading
        return Polynomial([c / lead for c in self.coeffs])

    def compose_linear(self, a, b) -> "Polynomial":
        """Return ``P(a*w + b)`` as a polynomial in ``w``."""
        shifted = self.taylor(b)
        return Polynomial([c * a ** k for k, c in enumerate(shifted)])

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if is_exact(other) or isinstance(other, (float, complex)):
            return self == Polynomial([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __reduce__(self):
        return (Polynomial, (self.coeffs,))


def poly_eval(P: Polynomial, z):
    return P(z)


def poly_derivative(P: Polynomial, k: int) -> Polynomial:
    return P.derivative(k)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over exact scalars."""
    a, b = a.to_exact(), b.to_exact()
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_check(P: Polynomial) -> bool:
    """True iff ``gcd(P, P')`` is a nonzero constant."""
    if P.is_zero:
        raise ZeroPolynomial("squarefree_check of the zero polynomial")
    if P.degree == 0:
        return True
    g = poly_gcd(P, P.derivative())
    return g.degree == 0


# -- interpolation -------------------------------------------------------------


class Interpolant(Polynomial):
    """Lagrange polynomial that remembers its nodes.

    Evaluation in the approximate backend uses the Lagrange product form
    over the nonzero node values: node values are reproduced exactly, zero
    nodes are exact zeros, and there is no cancelling normalization even when
    the nodes span many orders of magnitude.  Exact evaluation uses the
    coefficients.  Both describe the same polynomial.
    """

    __slots__ = ("nodes", "_basis")

    def __init__(self, coeffs, nodes):
        super().__init__(coeffs)
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "_basis", None)

    def _prepared(self):
        if self._basis is None:
            xs = [complex(q) for q, _ in self.nodes]
            terms = []
            for j, (xj, (_, v)) in enumerate(zip(xs, self.nodes)):
                v = complex(v)
                if v == 0:
                    continue
                others = [xk for k, xk in enumerate(xs) if k != j]
                terms.append((xj, v, others, [xj - xk for xk in others]))
            object.__setattr__(self, "_basis", (xs, terms))
        return self._basis

    def __call__(self, z):
        if is_exact(z) or not self.nodes:
            return super().__call__(z)
        z = complex(z)
        xs, terms = self._prepared()
        for xj, (_, v) in zip(xs, self.nodes):
            if z == xj:
                return complex(v)
        total = 0j
        for xj, v, others, dens in terms:
            prod = v
            for xk, dk in zip(others, dens):
                prod *= (z - xk) / dk
            total += prod
        return total

    def __reduce__(self):
        return (Interpolant, (self.coeffs, self.nodes))


def interpolate(nodes) -> Polynomial:
    """Lagrange polynomial of degree < len(nodes) through ``(q_k, c_k)``.

    Exact for exact input.  For approximate input the coefficients are
    computed in floating point; evaluation goes through the nodes
    (barycentric form), so it does not depend on their rounding.
    """
    nodes = list(nodes)
    exact = all(is_exact(q) and is_exact(c) for q, c in nodes)
    conv = to_exact if exact else complex
    zero = ZERO if exact else 0j
    xs = [conv(q) for q, _ in nodes]
    ys = [conv(c) for _, c in nodes]
    if len(set(xs)) != len(xs):
        raise DuplicateNode("interpolation nodes must be pairwise distinct")
    if not nodes:
        return Polynomial((), exact=True)
    # Newton divided differences, then expand to monomial form.
    n = len(xs)
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [dd[-1]]
    for i in range(n - 2, -1, -1):
        # coeffs <- coeffs * (w - xs[i]) + dd[i]
        new = [zero] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] = new[k + 1] + c
            new[k] = new[k] - c * xs[i]
        new[0] = new[0] + dd[i]
        coeffs = new
    return Interpolant(coeffs, list(zip(xs, ys)))


class FlatInterpolant(Polynomial):
    """Hermite polynomial with prescribed values and zero slopes at the nodes.

    Degree ``< 2n`` for ``n`` nodes.  The vanishing derivative makes the
    value insensitive, to first order, to perturbations of the argument near
    a node, which is what matters when a replica multiplier is evaluated at
    an invariant that carries rounding error.  Approximate evaluation uses
    the basis ``H_j = l_j^2 (1 - 2 l_j'(q_j)(w - q_j))`` with ``l_j`` in
    product form; exact evaluation uses the coefficients.
    """

    __slots__ = ("nodes", "_basis")

    def __init__(self, coeffs, nodes):
        super().__init__(coeffs)
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "_basis", None)

    def _prepared(self):
        if self._basis is None:
            xs = [complex(q) for q, _ in self.nodes]
            vs = [complex(v) for _, v in self.nodes]
            slopes = [sum(1 / (xj - xk) for k, xk in enumerate(xs) if k != j) for j, xj in enumerate(xs)]
            object.__setattr__(self, "_basis", (xs, vs, slopes))
        return self._basis

    def __call__(self, z):
        if is_exact(z) or not self.nodes:
            return super().__call__(z)
        z = complex(z)
        xs, vs, slopes = self._prepared()
        for xj, vj in zip(xs, vs):
            if z == xj:
                return vj
        acc = 0j
        for j, (xj, vj) in enumerate(zip(xs, vs)):
            if vj == 0:
                continue
            lj = 1 + 0j
            for k, xk in enumerate(xs):
                if k != j:
                    lj *= (z - xk) / (xj - xk)
            acc += vj * lj * lj * (1 - 2 * slopes[j] * (z - xj))
        return acc

    def __reduce__(self):
        return (FlatInterpolant, (self.coeffs, self.nodes))


def flat_interpolate(nodes) -> Polynomial:
    """Hermite interpolant through ``(q_k, c_k)`` with zero derivative at every ``q_k``.

    Exact for exact input; approximate input is handled as in ``interpolate``.
    """
    nodes = list(nodes)
    exact = all(is_exact(q) and is_exact(c) for q, c in nodes)
    conv = to_exact if exact else complex
    zero = ZERO if exact else 0j
    xs = [conv(q) for q, _ in nodes]
    ys = [conv(c) for _, c in nodes]
    if len(set(xs)) != len(xs):
        raise DuplicateNode("interpolation nodes must be pairwise distinct")
    if not nodes:
        return Polynomial((), exact=True)
    # divided differences on the doubled node sequence
    zs = [x for x in xs for _ in range(2)]
    n = len(zs)
    table = [ys[i // 2] for i in range(n)]
    dd = [table[0]]
    col = table
    for j in range(1, n):
        nxt = []
        for i in range(n - j):
            if zs[i + j] == zs[i]:
                nxt.append(zero)  # prescribed derivative
            else:
                nxt.append((col[i + 1] - col[i]) / (zs[i + j] - zs[i]))
        col = nxt
        dd.append(col[0])
    coeffs = [dd[-1]]
    for i in range(n - 2, -1, -1):
        new = [zero] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] = new[k + 1] + c
            new[k] = new[k] - c * zs[i]
        new[0] = new[0] + dd[i]
        coeffs = new
    return FlatInterpolant(coeffs, list(zip(xs, ys)))


# -- roots (used by the flow-time solvers, never for P itself) ----------------


def _rationalize(v: float, max_den: int) -> Fraction:
    return Fraction(v).limit_denominator(max_den)


def exact_roots_search(Q: Polynomial, max_den: int = 10**6) -> list:
    """Gaussian-rational roots of an exact polynomial.

    Linear polynomials are solved directly.  Higher degrees use numerical
    root estimates as candidates, rationalize them, and keep only candidates
    that are verified to be roots by exact evaluation.  Roots that are not
    Gaussian rationals with denominators up to ``max_den`` are not found.
    """
    Q = Q.to_exact()
    if Q.is_zero:
        raise ZeroPolynomial("every scalar is a root of the zero polynomial")
    if Q.degree == 0:
        return []
    if Q.degree == 1:
        return [-Q.coeffs[0] / Q.coeffs[1]]
    approx = np.roots(Q.numpy_coeffs()[::-1])
    found = []
    for r in approx:
        for den in (1, 2, 4, 8, 16, 64, 256, 10**3, 10**4, max_den):
            cand = ExactComplex(_rationalize(r.real, den), _rationalize(r.imag, den))
            if cand not in found and not Q(cand):
                found.append(cand)
                break
    return found

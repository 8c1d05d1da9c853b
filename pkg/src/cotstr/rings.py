"""Connected coefficient rings, finite products of them, and element arithmetic.

Every supported factor is a connected noetherian ring whose linear algebra
can be done exactly:

* ``Integers``, ``PrimeField(p)``, ``Rationals`` and ``PolyOverPrimeField(p)``
  are Euclidean domains and run Smith normal form directly;
* ``IntegersMod(p**k)`` is handled by lifting to the integers.

Elements are plain Python values: ``int`` for the integer-like factors,
:class:`fractions.Fraction` for the rationals and :class:`Poly` for
polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import itertools
import re
from typing import Iterator

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p


class ValidationError(ValueError):
    """Raised for malformed or mathematically invalid input data."""


class UnsupportedOperation(RuntimeError):
    """Raised when an operation is not available for a given ring."""


# ---------------------------------------------------------------------------
# polynomials over F_p


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over F_p, coefficients stored low degree first."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [c % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, p: int, c: int) -> "Poly":
        return cls(p, (c,))

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls(p, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(self.p, tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                                  for i in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.p, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(self.p, tuple(out))

    def scale(self, c: int) -> "Poly":
        return Poly(self.p, tuple(c * x for x in self.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        db = other.degree
        inv = pow(other.lc, -1, p)
        q = [0] * max(len(r) - db, 0)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            if c:
                q[k] = c
                for j, y in enumerate(other.coeffs):
                    r[k + j] = (r[k + j] - c * y) % p
        return Poly(p, tuple(q)), Poly(p, tuple(r))

    def __pow__(self, e: int) -> "Poly":
        out = Poly.const(self.p, 1)
        for _ in range(e):
            out = out * self
        return out

    def monic(self) -> "Poly":
        return self.scale(pow(self.lc, -1, self.p))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"Poly[{self.p}]({self})"


_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$")


def parse_poly(p: int, text: str) -> Poly:
    s = text.replace(" ", "")
    if not s:
        raise ValidationError("empty polynomial string")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        m = _TERM.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValidationError(f"cannot parse polynomial term {term!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            e = 0
        else:
            e = int(m.group(3)) if m.group(3) is not None else 1
        coeffs[e] = coeffs.get(e, 0) + sign * c
    deg = max(coeffs) if coeffs else 0
    return Poly(p, tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def _to_gf(f: Poly) -> list[int]:
    return list(reversed(f.coeffs))


def _from_gf(p: int, cs) -> Poly:
    return Poly(p, tuple(int(c) for c in reversed(cs)))


def monic_polys(p: int, degree: int) -> Iterator[Poly]:
    """All monic polynomials of the given degree, in lexicographic order."""
    for tail in itertools.product(range(p), repeat=degree):
        yield Poly(p, tuple(reversed(tail)) + (1,))


# ---------------------------------------------------------------------------
# connected factors


class ConnectedFactor:
    """Base class of the supported connected rings.

    Subclasses are frozen dataclasses; instances compare by value and are
    used as dictionary keys and in JSON round trips.
    """

    kind: str = ""
    euclidean = True
    is_field = False
    hereditary = True

    # arithmetic -----------------------------------------------------------
    def zero(self):
        return 0

    def one(self):
        return 1

    def reduce(self, a):
        return a

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return self.reduce(-a)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return self.reduce(n)

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    # Euclidean structure (domains only) -----------------------------------
    def size(self, a) -> int:
        """Euclidean size of a nonzero element."""
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def normal_part(self, a):
        """Return ``(u, n)`` with ``u`` a unit, ``n`` normalized and ``a = u * n``."""
        raise NotImplementedError

    def unit_inverse(self, u):
        raise NotImplementedError

    def divides(self, a, b) -> bool:
        if self.is_zero(a):
            return self.is_zero(b)
        return self.is_zero(self.divmod(b, a)[1])

    # text -----------------------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def element(self, value):
        """Coerce ints or strings into a reduced element of this factor."""
        if isinstance(value, str):
            return self.parse(value)
        return self.reduce(value)

    # primes ---------------------------------------------------------------
    @property
    def has_zero_prime(self) -> bool:
        """Whether (0) is a prime ideal of this factor."""
        return True

    @property
    def has_maximal_primes(self) -> bool:
        """Whether nonzero primes exist (so the spectrum has closed points)."""
        return False

    def is_normalized_irreducible(self, a) -> bool:
        return False

    def prime_divisors(self, a) -> list:
        """Normalized irreducibles dividing a nonzero element."""
        return [q for q, _ in self.factor(a)[0]]

    def factor(self, a):
        raise NotImplementedError

    def fresh_primes(self, exclude=()) -> Iterator:
        """Infinite stream of normalized irreducibles not in ``exclude``."""
        raise UnsupportedOperation(f"{self.kind} has no nonzero primes outside a finite set")

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Integers(ConnectedFactor):
    kind = "Integers"

    def is_unit(self, a):
        return a in (1, -1)

    def size(self, a):
        return abs(a)

    def divmod(self, a, b):
        return divmod(a, b)

    def normal_part(self, a):
        return (-1, -a) if a < 0 else (1, a)

    def unit_inverse(self, u):
        return u

    def parse(self, text):
        try:
            return int(text)
        except ValueError:
            raise ValidationError(f"not an integer: {text!r}") from None

    @property
    def has_maximal_primes(self):
        return True

    def is_normalized_irreducible(self, a):
        return isinstance(a, int) and a > 1 and sympy.isprime(a)

    def factor(self, a):
        if a == 0:
            raise ValidationError("zero has no factorization")
        unit = -1 if a < 0 else 1
        return sorted((int(q), int(e)) for q, e in sympy.factorint(abs(a)).items()), unit

    def fresh_primes(self, exclude=()):
        ex = set(exclude)
        q = 2
        while True:
            if q not in ex:
                yield q
            q = int(sympy.nextprime(q))

    def __str__(self):
        return "Integers"


@dataclass(frozen=True)
class IntegersMod(ConnectedFactor):
    """Z/m with m a prime power."""

    m: int
    kind = "IntegersMod"
    euclidean = False

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ValidationError(f"IntegersMod needs a modulus >= 2, got {self.m!r}")
        fac = sympy.factorint(self.m)
        if len(fac) != 1:
            raise ValidationError(
                f"IntegersMod({self.m}) is not a prime power; enter composite moduli "
                "as a product of prime-power factors")
        (p, k), = fac.items()
        object.__setattr__(self, "_p", int(p))
        object.__setattr__(self, "_k", int(k))

    @property
    def p(self) -> int:
        return self._p

    @property
    def k(self) -> int:
        return self._k

    @property
    def is_field(self):
        return self._k == 1

    @property
    def hereditary(self):
        return self._k == 1

    def reduce(self, a):
        return a % self.m

    def is_unit(self, a):
        return a % self.p != 0

    def valuation(self, a) -> int:
        """p-adic valuation of a lift of ``a``, capped at k (so 0 has valuation k)."""
        a %= self.m
        v = 0
        while v < self.k and a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def unit_inverse(self, u):
        return pow(u, -1, self.m)

    def normal_part(self, a):
        a %= self.m
        if a == 0:
            return 1, 0
        v = self.valuation(a)
        return (a // self.p ** v) % self.m, self.p ** v

    def divides(self, a, b) -> bool:
        # ideals of Z/p^k form a chain
        return self.valuation(a) <= self.valuation(b)

    def parse(self, text):
        try:
            return int(text) % self.m
        except ValueError:
            raise ValidationError(f"not a residue: {text!r}") from None

    @property
    def has_zero_prime(self):
        # for k = 1 the unique prime (p) is the zero ideal
        return self._k == 1

    @property
    def has_maximal_primes(self):
        return self._k > 1

    def is_normalized_irreducible(self, a):
        return self._k > 1 and a == self.p

    def factor(self, a):
        # the p-part of a lift; the rest is a unit
        a %= self.m
        if a == 0:
            return [(self.p, self.k)], 1
        v = self.valuation(a)
        return ([(self.p, v)] if v else []), (a // self.p ** v) % self.m

    def fresh_primes(self, exclude=()):
        raise UnsupportedOperation(f"IntegersMod({self.m}) has the single prime ({self.p})")

    def to_json(self):
        return {"kind": self.kind, "m": self.m}

    def __str__(self):
        return f"IntegersMod({self.m})"


@dataclass(frozen=True)
class PrimeField(ConnectedFactor):
    p: int
    kind = "PrimeField"
    is_field = True

    def __post_init__(self):
        if not isinstance(self.p, int) or not sympy.isprime(self.p):
            raise ValidationError(f"PrimeField needs a prime, got {self.p!r}")

    def reduce(self, a):
        return a % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def size(self, a):
        return 0

    def divmod(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p, 0

    def normal_part(self, a):
        return a % self.p, 1

    def unit_inverse(self, u):
        return pow(u, -1, self.p)

    def parse(self, text):
        try:
            return int(text) % self.p
        except ValueError:
            raise ValidationError(f"not an element of F_{self.p}: {text!r}") from None

    def factor(self, a):
        if a % self.p == 0:
            raise ValidationError("zero has no factorization")
        return [], a % self.p

    def to_json(self):
        return {"kind": self.kind, "p": self.p}

    def __str__(self):
        return f"PrimeField({self.p})"


@dataclass(frozen=True)
class Rationals(ConnectedFactor):
    kind = "Rationals"
    is_field = True

    def reduce(self, a):
        return Fraction(a)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_unit(self, a):
        return a != 0

    def size(self, a):
        return 0

    def divmod(self, a, b):
        return Fraction(a) / b, Fraction(0)

    def normal_part(self, a):
        return Fraction(a), Fraction(1)

    def unit_inverse(self, u):
        return 1 / Fraction(u)

    def parse(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational: {text!r}") from None

    def factor(self, a):
        if a == 0:
            raise ValidationError("zero has no factorization")
        return [], Fraction(a)

    def __str__(self):
        return "Rationals"


@dataclass(frozen=True)
class PolyOverPrimeField(ConnectedFactor):
    """F_p[x]."""

    p: int
    kind = "PolyOverPrimeField"

    def __post_init__(self):
        if not isinstance(self.p, int) or not sympy.isprime(self.p):
            raise ValidationError(f"PolyOverPrimeField needs a prime, got {self.p!r}")

    def zero(self):
        return Poly(self.p, ())

    def one(self):
        return Poly(self.p, (1,))

    def reduce(self, a):
        if isinstance(a, Poly):
            if a.p != self.p:
                raise ValidationError(f"polynomial over F_{a.p} used in F_{self.p}[x]")
            return a
        if isinstance(a, int):
            return Poly(self.p, (a,))
        raise ValidationError(f"cannot coerce {a!r} into F_{self.p}[x]")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return a.degree == 0

    def size(self, a):
        return a.degree

    def divmod(self, a, b):
        return divmod(a, b)

    def normal_part(self, a):
        if a.is_zero():
            return self.one(), a
        return Poly.const(self.p, a.lc), a.monic()

    def unit_inverse(self, u):
        return Poly.const(self.p, pow(u.lc, -1, self.p))

    def parse(self, text):
        return parse_poly(self.p, text)

    @property
    def has_maximal_primes(self):
        return True

    def is_normalized_irreducible(self, a):
        if not isinstance(a, Poly) or a.p != self.p or a.degree < 1 or a.lc != 1:
            return False
        return bool(gf_irreducible_p(_to_gf(a), self.p, ZZ))

    def factor(self, a):
        if a.is_zero():
            raise ValidationError("zero has no factorization")
        lc, facs = gf_factor(_to_gf(a), self.p, ZZ)
        out = sorted(((_from_gf(self.p, f), int(e)) for f, e in facs),
                     key=lambda t: (t[0].degree, t[0].coeffs))
        return out, Poly.const(self.p, int(lc))

    def fresh_primes(self, exclude=()):
        ex = set(exclude)
        for d in itertools.count(1):
            for f in monic_polys(self.p, d):
                if f not in ex and self.is_normalized_irreducible(f):
                    yield f

    def to_json(self):
        return {"kind": self.kind, "p": self.p}

    def __str__(self):
        return f"PolyOverPrimeField({self.p})"


def factor_element(F: ConnectedFactor, a):
    """Factor ``a`` into normalized irreducibles.

    Returns ``(factors, unit)`` where ``factors`` is a sorted list of
    ``(irreducible, multiplicity)``.  Over ``IntegersMod(p**k)`` the result
    describes the p-part of a lift (zero maps to ``p**k``).
    """
    return F.factor(F.element(a))


def expand_factorization(F: ConnectedFactor, factors, unit):
    out = F.reduce(unit)
    for q, e in factors:
        for _ in range(e):
            out = F.mul(out, q)
    return out


# ---------------------------------------------------------------------------
# product rings


def factor_from_json(obj) -> ConnectedFactor:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError(f"factor must be an object with a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "Integers":
            return Integers()
        if kind == "Rationals":
            return Rationals()
        if kind == "IntegersMod":
            return IntegersMod(int(obj["m"]))
        if kind == "PrimeField":
            return PrimeField(int(obj["p"]))
        if kind == "PolyOverPrimeField":
            return PolyOverPrimeField(int(obj["p"]))
    except KeyError as e:
        raise ValidationError(f"factor {kind} is missing field {e}") from None
    raise ValidationError(f"unknown factor kind {kind!r}")


@dataclass(frozen=True)
class RingDescriptor:
    """A finite product of connected factors; factor i is component i of Spec."""

    factors: tuple[ConnectedFactor, ...]

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise ValidationError("a ring needs at least one factor")
        for f in fs:
            if not isinstance(f, ConnectedFactor):
                raise ValidationError(f"not a connected factor: {f!r}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def of(cls, *factors: ConnectedFactor) -> "RingDescriptor":
        return cls(tuple(factors))

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, i) -> ConnectedFactor:
        return self.factors[i]

    def element(self, *coords) -> "RingElement":
        if len(coords) != len(self.factors):
            raise ValidationError(f"expected {len(self.factors)} coordinates, got {len(coords)}")
        return RingElement(self, tuple(F.element(c) for F, c in zip(self.factors, coords)))

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj) -> "RingDescriptor":
        if isinstance(obj, list):
            obj = {"factors": obj}
        if not isinstance(obj, dict) or not isinstance(obj.get("factors"), list):
            raise ValidationError("ring must be {'factors': [...]}")
        return cls(tuple(factor_from_json(f) for f in obj["factors"]))

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class RingElement:
    """An element of a product ring, one coordinate per factor."""

    ring: RingDescriptor
    coords: tuple

    def _zip(self, other):
        if other.ring != self.ring:
            raise ValidationError("ring mismatch")
        return zip(self.ring.factors, self.coords, other.coords)

    def __add__(self, other):
        return RingElement(self.ring, tuple(F.add(a, b) for F, a, b in self._zip(other)))

    def __sub__(self, other):
        return RingElement(self.ring, tuple(F.sub(a, b) for F, a, b in self._zip(other)))

    def __mul__(self, other):
        return RingElement(self.ring, tuple(F.mul(a, b) for F, a, b in self._zip(other)))

    def __neg__(self):
        return RingElement(self.ring, tuple(F.neg(a) for F, a in zip(self.ring.factors, self.coords)))

    def is_zero(self) -> bool:
        return all(F.is_zero(a) for F, a in zip(self.ring.factors, self.coords))

    def is_idempotent(self) -> bool:
        return self * self == self


def connected_components(R: RingDescriptor) -> list[tuple[int, ConnectedFactor]]:
    return list(enumerate(R.factors))


def is_regular(R: RingDescriptor) -> bool:
    """Regular iff every factor is; only ``IntegersMod(p**k)`` with k > 1 fails."""
    return all(not (isinstance(F, IntegersMod) and F.k > 1) for F in R.factors)


def is_hereditary(R: RingDescriptor) -> bool:
    return all(F.hereditary for F in R.factors)

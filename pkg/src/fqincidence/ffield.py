"""Exact arithmetic in GF(q) for prime powers q = p^n, n <= 4, q <= 2^20.

A field element is represented by its index, a plain int in [0, q).  The
index encodes polynomial coefficients c_0..c_{n-1} over GF(p) via

    index = sum(c_i * p**i),

so 0 is the additive identity and 1 the multiplicative identity.  The
extension modulus is the lexicographically smallest monic irreducible
polynomial of degree n, coefficients compared low-degree-first.  That choice
is deterministic, so a (p, n) pair pins bit-identical file formats on every
machine.

For prime fields arithmetic goes straight through Python ints; for small
extension fields (q <= 256) full add/mul tables are built lazily and cached,
which keeps the exhaustive counting engines fast.
"""

from dataclasses import dataclass

from .errors import DegreeOutOfRange, DivisionByZero, NoIrreducibleFound, NotPrime

# Desk-scale caps.
MAX_ORDER = 1 << 20
MAX_DEGREE = 4

# Extension fields up to this order get full lookup tables.
_TABLE_CAP = 256

# An element is just its index.
FieldElement = int


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def _poly_eval(coeffs: list[int], x: int, p: int) -> int:
    """Evaluate a polynomial (coefficients low-degree-first) at x over GF(p)."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_mod_monic(f: list[int], g: list[int], p: int) -> list[int]:
    """Remainder of f modulo a monic polynomial g over GF(p)."""
    r = list(f)
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return r[:dg]


def _has_root(coeffs: list[int], p: int) -> bool:
    return any(_poly_eval(coeffs, x, p) == 0 for x in range(p))


def _irreducible_quadratics(p: int) -> list[list[int]]:
    out = []
    for c0 in range(p):
        for c1 in range(p):
            g = [c0, c1, 1]
            if not _has_root(g, p):
                out.append(g)
    return out


def _is_irreducible(coeffs: list[int], p: int, n: int) -> bool:
    # Degree 2 and 3 reduce iff they have a root.  Degree 4 additionally needs
    # the no-irreducible-quadratic-factor check.
    if _has_root(coeffs, p):
        return False
    if n <= 3:
        return True
    for g in _irreducible_quadratics(p):
        if not any(_poly_mod_monic(coeffs, g, p)):
            return False
    return True


def make_field(p: int, n: int) -> "FieldSpec":
    """Construct GF(p^n) with the canonical (lexicographically smallest) modulus."""
    if not is_prime(p):
        raise NotPrime(f"p = {p} is not prime")
    if not 1 <= n <= MAX_DEGREE:
        raise DegreeOutOfRange(f"extension degree n = {n} outside [1, {MAX_DEGREE}]")
    q = p**n
    if q > MAX_ORDER:
        raise DegreeOutOfRange(f"q = p^n = {q} exceeds the cap {MAX_ORDER}")
    if n == 1:
        modulus = (0, 1)  # degree-1 placeholder: the class of x
    else:
        modulus = None
        # Lexicographic scan: the constant coefficient is the most significant.
        for idx in range(q):
            digits = []
            rest = idx
            for k in range(n - 1, -1, -1):
                digits.append(rest // p**k)
                rest %= p**k
            cand = digits + [1]
            if _is_irreducible(cand, p, n):
                modulus = tuple(cand)
                break
        if modulus is None:
            raise NoIrreducibleFound(f"no irreducible modulus for GF({p}^{n})")
    return FieldSpec(p=p, n=n, q=q, modulus=modulus, q_mod4=q % 4)


class _Ops:
    """Flat lookup tables for one small extension field."""

    __slots__ = ("add", "mul", "neg", "inv")

    def __init__(self, add, mul, neg, inv):
        self.add = add
        self.mul = mul
        self.neg = neg
        self.inv = inv


_OPS_CACHE: dict["FieldSpec", _Ops] = {}


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of GF(q); all arithmetic methods are pure."""

    p: int
    n: int
    q: int
    modulus: tuple[int, ...]
    q_mod4: int

    def __post_init__(self):
        if self.q != self.p**self.n:
            raise ValueError("q must equal p^n")
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if self.q_mod4 != self.q % 4:
            raise ValueError("q_mod4 inconsistent with q")

    # -- element encoding -------------------------------------------------

    def elements(self) -> range:
        """All q elements in index order."""
        return range(self.q)

    def coeffs(self, a: int) -> tuple[int, ...]:
        cs = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            cs.append(r)
        return tuple(cs)

    def from_coeffs(self, cs) -> int:
        a = 0
        for c in reversed(cs):
            a = a * self.p + c % self.p
        return a

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        ops = _ops(self)
        if ops is not None:
            return ops.add[a * self.q + b]
        return self._add_raw(a, b)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        ops = _ops(self)
        if ops is not None:
            return ops.neg[a]
        p = self.p
        return self.from_coeffs([(-c) % p for c in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a * b) % self.p
        ops = _ops(self)
        if ops is not None:
            return ops.mul[a * self.q + b]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        ops = _ops(self)
        if ops is not None:
            return ops.inv[a]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        """a**e by square-and-multiply; e must be >= 0 (0**0 == 1)."""
        if e < 0:
            raise ValueError("negative exponent; invert explicitly")
        if self.n == 1:
            return pow(a, e, self.p)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def is_square(self, e: int) -> bool:
        """True iff e has a square root in the field.

        Odd q uses the e^((q-1)/2) criterion; even q scans exhaustively
        (every element of a characteristic-2 field is a square).
        """
        if self.p == 2:
            return any(self.mul(y, y) == e for y in self.elements())
        if e == 0:
            return True
        return self.pow(e, (self.q - 1) // 2) == 1

    # -- raw polynomial paths (big extension fields, table construction) ---

    def _add_raw(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.from_coeffs([(x + y) % p for x, y in zip(ca, cb)])

    def _mul_raw(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(2 * n - 2, n - 1, -1):
            c = prod[i]
            if c:
                for j in range(n + 1):
                    prod[i - n + j] = (prod[i - n + j] - c * mod[j]) % p
        return self.from_coeffs(prod[:n])


def _ops(fs: FieldSpec) -> _Ops | None:
    if fs.q > _TABLE_CAP:
        return None
    ops = _OPS_CACHE.get(fs)
    if ops is None:
        q = fs.q
        add = [0] * (q * q)
        mul = [0] * (q * q)
        neg = [0] * q
        inv = [0] * q
        for a in range(q):
            row = a * q
            for b in range(q):
                add[row + b] = fs._add_raw(a, b)
                mul[row + b] = fs._mul_raw(a, b)
        # inverses straight from the finished tables
        for a in range(q):
            row = a * q
            for b in range(q):
                if add[row + b] == 0:
                    neg[a] = b
                if a and mul[row + b] == 1:
                    inv[a] = b
        ops = _Ops(add, mul, neg, inv)
        _OPS_CACHE[fs] = ops
    return ops

"""Exact scalar arithmetic.

Ground field is Q(q^(1/D)) for a fixed even integer D.  Elements are stored
as reduced fractions of Laurent polynomials in u = q^(1/D) with integer
coefficients.  On top of that we have univariate rational functions over an
arbitrary coefficient field (used for the spectral parameter z, and nested
once more for two-parameter identities) and truncated Laurent series.
"""

from fractions import Fraction


class ScalarError(Exception):
    pass


class PoleAtOne(ScalarError):
    pass


class ExponentNotRepresentable(ScalarError):
    pass


# ---------------------------------------------------------------------------
# Laurent polynomial helpers.  A polynomial is a dict {exponent: Fraction},
# zero coefficients never stored.  The zero polynomial is {}.

def _trim(d):
    return {k: v for k, v in d.items() if v}


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _pneg(a):
    return {k: -v for k, v in a.items()}


def _pmul(a, b):
    out = {}
    for i, c in a.items():
        for j, d in b.items():
            k = i + j
            w = out.get(k, 0) + c * d
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def _pshift(a, n):
    return {k + n: v for k, v in a.items()}


def _to_list(a):
    """Ordinary polynomial dict -> coefficient list (low to high)."""
    if not a:
        return []
    deg = max(a)
    return [Fraction(a.get(i, 0)) for i in range(deg + 1)]


def _from_list(cs):
    return {i: c for i, c in enumerate(cs) if c}


def _ldivmod(a, b):
    """Polynomial division on coefficient lists over Q."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if db < 0:
        raise ZeroDivisionError
    quo = [Fraction(0)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        while a and not a[-1]:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1] / lb
        k = len(a) - 1 - db
        quo[k] = c
        for i in range(db + 1):
            a[k + i] -= c * b[i]
        a.pop()
    while a and not a[-1]:
        a.pop()
    return quo, a


_GCD_PRIME = (1 << 61) - 1


def _mod_gcd_degree(a, b, p):
    """Degree of gcd of the specializations mod p of integer coefficient
    lists, or None when the specialization is degenerate.  The true gcd
    degree is at most this value, so 0 certifies coprimality."""
    a = [x % p for x in a]
    b = [x % p for x in b]
    if not a[-1] or not b[-1]:
        return None
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [x * inv % p for x in b]
        while len(a) >= len(b):
            c = a[-1]
            if c:
                k = len(a) - len(b)
                for i in range(len(b) - 1):
                    a[k + i] = (a[k + i] - c * b[i]) % p
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _lgcd(a, b):
    """Monic gcd of coefficient lists over Q, via the primitive Euclidean
    remainder sequence over Z (clears denominators and strips integer
    content at each step to avoid fraction blow-up).  A modular Euclid
    first certifies the common coprime case without any big arithmetic."""
    if len(a) == 1 or len(b) == 1:
        return [Fraction(1)]
    A = _clear_denoms(a)
    B = _clear_denoms(b)
    if _mod_gcd_degree(A, B, _GCD_PRIME) == 0:
        return [Fraction(1)]
    while B:
        if len(B) == 1:
            A = [1]
            break
        A, B = B, _prim(_prem(A, B))
    lead = Fraction(A[-1])
    return [Fraction(v) / lead for v in A]


def _clear_denoms(xs):
    from math import gcd
    mult = 1
    for c in xs:
        d = c.denominator
        mult = mult * d // gcd(mult, d)
    out = [int(c * mult) for c in xs]
    g = 0
    for v in out:
        g = gcd(g, v)
    if g > 1:
        out = [v // g for v in out]
    return out


def _prim(xs):
    from math import gcd
    g = 0
    for v in xs:
        g = gcd(g, v)
    if g > 1:
        xs = [v // g for v in xs]
    return xs


def _prem(x, y):
    """Pseudo-remainder of integer coefficient lists."""
    x = list(x)
    dy = len(y) - 1
    ly = y[-1]
    while True:
        while x and not x[-1]:
            x.pop()
        if len(x) - 1 < dy or not x:
            break
        c = x[-1]
        k = len(x) - 1 - dy
        x = [v * ly for v in x]
        for i in range(dy + 1):
            x[k + i] -= c * y[i]
        x.pop()
    return x


_PGCD_CACHE = {}


def _pgcd(a, b):
    """Monic gcd of two Laurent polynomial dicts (as ordinary polys after
    shifting away the valuation; the u-power ambiguity is resolved by
    returning a gcd with valuation 0).  Memoized: the same denominators
    recur across the entries of any one matrix computation."""
    if not a:
        return _normalize_shift(b)
    if not b:
        return _normalize_shift(a)
    key = (tuple(sorted(a.items())), tuple(sorted(b.items())))
    hit = _PGCD_CACHE.get(key)
    if hit is not None:
        return hit
    la = _to_list(_pshift(a, -min(a)))
    lb = _to_list(_pshift(b, -min(b)))
    g = _from_list(_lgcd(la, lb))
    if len(_PGCD_CACHE) > 200000:
        _PGCD_CACHE.clear()
    _PGCD_CACHE[key] = g
    return g


def _normalize_shift(a):
    if not a:
        return {}
    return _pshift(a, -min(a))


def _pdiv_exact(a, b):
    """Exact division of Laurent dicts; b must divide a."""
    if not a:
        return {}
    va, vb = min(a), min(b)
    la = _to_list(_pshift(a, -va))
    lb = _to_list(_pshift(b, -vb))
    q, r = _ldivmod(la, lb)
    if r:
        raise ScalarError("non-exact polynomial division")
    return _pshift(_from_list(q), va - vb)


class ScalarField:
    """The field Q(q^(1/D)); produces and owns Scalar instances."""

    def __init__(self, D):
        if D <= 0:
            raise ScalarError("D must be positive")
        self.D = D
        self.zero = Scalar(self, {}, {0: Fraction(1)})
        self.one = Scalar(self, {0: Fraction(1)}, {0: Fraction(1)})
        self.q = self.q_pow(1)

    def __repr__(self):
        return f"ScalarField(D={self.D})"

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.D == self.D

    def from_fraction(self, c):
        c = Fraction(c)
        return Scalar(self, {0: c} if c else {}, {0: Fraction(1)})

    def from_int(self, n):
        return self.from_fraction(n)

    def embed(self, x):
        """Coerce x (int, Fraction or Scalar of the same field) into self."""
        if isinstance(x, Scalar):
            if x.field.D != self.D:
                raise ScalarError("scalar from a different field")
            return x
        return self.from_fraction(x)

    def u_pow(self, k):
        return Scalar(self, {k: Fraction(1)}, {0: Fraction(1)})

    def q_pow(self, r):
        """q^r for rational r with D*r integral."""
        e = Fraction(r) * self.D
        if e.denominator != 1:
            raise ExponentNotRepresentable(
                f"q^{r} is not in Q(q^(1/{self.D}))")
        return self.u_pow(int(e))

    def qi_pow(self, d, n):
        """q_i^n where q_i = q^d."""
        return self.q_pow(Fraction(d) * n)


class Scalar:
    """Element of Q(q^(1/D)) as a reduced num/den pair of Laurent dicts."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, reduce=True):
        self.field = field
        if reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num, den):
        if not den:
            raise ZeroDivisionError("scalar division by zero")
        if not num:
            return {}, {0: Fraction(1)}
        g = _pgcd(num, den)
        if len(g) > 1 or (g and min(g) != 0):
            num = _pdiv_exact(num, g)
            den = _pdiv_exact(den, g)
        # shift so den has valuation 0
        vd = min(den)
        num = _pshift(num, -vd)
        den = _pshift(den, -vd)
        # clear rational denominators, divide by common content
        mult = 1
        for c in list(num.values()) + list(den.values()):
            mult = mult * c.denominator // _igcd(mult, c.denominator)
        from math import gcd
        ints = [int(c * mult) for c in num.values()] + \
               [int(c * mult) for c in den.values()]
        g0 = 0
        for v in ints:
            g0 = gcd(g0, v)
        scale = Fraction(mult, g0 if g0 else 1)
        num = {k: v * scale for k, v in num.items()}
        den = {k: v * scale for k, v in den.items()}
        # sign: leading coefficient of den positive
        if den[max(den)] < 0:
            num = _pneg(num)
            den = _pneg(den)
        return num, den

    # -- ring/field operations ---------------------------------------------
    def _chk(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        if not isinstance(other, Scalar) or other.field.D != self.field.D:
            raise ScalarError("incompatible scalar operands")
        return other

    def __add__(self, other):
        o = self._chk(other)
        if self.den == o.den:
            return Scalar(self.field, _padd(self.num, o.num), self.den)
        return Scalar(self.field,
                      _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                      _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, _pneg(self.num), self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._chk(other))

    def __rsub__(self, other):
        return self._chk(other) - self

    def __mul__(self, other):
        o = self._chk(other)
        # cross-reduce: each pair below is coprime after construction, so
        # the product needs no further gcd, only cheap renormalization
        a = Scalar(self.field, self.num, o.den)
        b = Scalar(self.field, o.num, self.den)
        return Scalar(self.field, _pmul(a.num, b.num),
                      _pmul(a.den, b.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._chk(other)
        if not o.num:
            raise ZeroDivisionError("scalar division by zero")
        a = Scalar(self.field, self.num, o.num)
        b = Scalar(self.field, o.den, self.den)
        return Scalar(self.field, _pmul(a.num, b.num),
                      _pmul(a.den, b.den))

    def __rtruediv__(self, other):
        return self._chk(other) / self

    def inv(self):
        return 1 / self

    def __pow__(self, n):
        if n < 0:
            return (1 / self) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())),
                     tuple(sorted(self.den.items()))))

    # -- structure maps -----------------------------------------------------
    def bar(self):
        """The involution q^(1/D) -> q^(-1/D)."""
        return Scalar(self.field,
                      {-k: v for k, v in self.num.items()},
                      {-k: v for k, v in self.den.items()})

    def specialize_q1(self):
        """Value at q = 1 as a Fraction; reduced form first, so a genuine
        pole raises."""
        nv = sum(self.num.values(), Fraction(0))
        dv = sum(self.den.values(), Fraction(0))
        if dv == 0:
            raise PoleAtOne(f"pole at q=1 in {self}")
        return nv / dv

    def subs_u(self, val):
        """Evaluate at a numeric value of u (Fraction), for spot checks."""
        val = Fraction(val)
        nv = sum(c * val ** k for k, c in self.num.items())
        dv = sum(c * val ** k for k, c in self.den.items())
        return nv / dv

    def is_monomial(self):
        return len(self.num) == 1 and len(self.den) == 1

    def monomial_parts(self):
        """(coefficient, u-exponent) for a monomial scalar."""
        if not self.is_monomial():
            raise ScalarError("not a monomial")
        (kn, cn), = self.num.items()
        (kd, cd), = self.den.items()
        return cn / cd, kn - kd

    def size(self):
        return len(self.num) + len(self.den)

    # -- printing -----------------------------------------------------------
    def _poly_str(self, d):
        D = self.field.D
        terms = []
        for k in sorted(d, reverse=True):
            c = d[k]
            e = Fraction(k, D)
            if e == 0:
                terms.append(str(c))
                continue
            if e == 1:
                p = "q"
            elif e.denominator == 1:
                p = f"q^{e}"
            else:
                p = f"q^({e})"
            if c == 1:
                terms.append(p)
            elif c == -1:
                terms.append(f"-{p}")
            else:
                terms.append(f"{c}*{p}")
        s = " + ".join(terms).replace("+ -", "- ")
        return s if s else "0"

    def __repr__(self):
        n = self._poly_str(self.num)
        if self.den == {0: Fraction(1)}:
            return n
        d = self._poly_str(self.den)
        return f"({n})/({d})"


def _igcd(a, b):
    from math import gcd
    return gcd(a, b)


# ---------------------------------------------------------------------------
# q-combinatorics

def q_int(field, n, d=1):
    """[n]_{q_i} with q_i = q^d."""
    q = field.q_pow(d)
    if n == 0:
        return field.zero
    out = field.zero
    a = abs(n)
    for j in range(a):
        out = out + q ** (a - 1 - 2 * j)
    return out if n > 0 else -out


def q_factorial(field, n, d=1):
    out = field.one
    for j in range(1, n + 1):
        out = out * q_int(field, j, d)
    return out


def q_binom(field, n, k, d=1):
    """Gaussian binomial [n choose k]_{q_i}; n may be negative."""
    if k < 0:
        return field.zero
    num = field.one
    for j in range(1, k + 1):
        num = num * q_int(field, n - k + j, d)
    return num / q_factorial(field, k, d)


# ---------------------------------------------------------------------------
# Parsing of scalar expressions appearing in config files: integers, 'q',
# + - * / ^ and parentheses; exponents may be integers or (a/b).

def parse_scalar(field, text):
    toks = _tokenize(text)
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def eat(t=None):
        tok = peek()
        if tok is None or (t is not None and tok != t):
            raise ScalarError(f"parse error in {text!r} at token {tok!r}")
        pos[0] += 1
        return tok

    def parse_expr():
        if peek() == "-":
            eat()
            out = -parse_term()
        else:
            out = parse_term()
        while peek() in ("+", "-"):
            op = eat()
            t = parse_term()
            out = out + t if op == "+" else out - t
        return out

    def parse_term():
        out = parse_factor()
        while peek() in ("*", "/"):
            op = eat()
            f = parse_factor()
            out = out * f if op == "*" else out / f
        return out

    def parse_factor():
        a = parse_atom()
        if peek() == "^":
            eat()
            e = parse_exponent()
            if isinstance(a, Scalar) and a.is_monomial():
                c, k = a.monomial_parts()
                if c == 1:
                    return field.q_pow(Fraction(k, field.D) * e)
            if e.denominator != 1:
                raise ScalarError("fractional power of a non-q base")
            return a ** e.numerator
        return a

    def parse_atom():
        tok = peek()
        if tok == "(":
            eat()
            out = parse_expr()
            eat(")")
            return out
        if tok == "q":
            eat()
            return field.q
        if tok == "-":
            eat()
            return -parse_atom()
        if isinstance(tok, int):
            eat()
            return field.from_int(tok)
        raise ScalarError(f"parse error in {text!r} at token {tok!r}")

    def parse_exponent():
        tok = peek()
        if tok == "(":
            eat()
            neg = False
            if peek() == "-":
                eat()
                neg = True
            a = eat()
            if peek() == "/":
                eat()
                b = eat()
                out = Fraction(a, b)
            else:
                out = Fraction(a)
            eat(")")
            return -out if neg else out
        neg = False
        if tok == "-":
            eat()
            neg = True
        a = eat()
        if not isinstance(a, int):
            raise ScalarError(f"bad exponent in {text!r}")
        return Fraction(-a if neg else a)

    out = parse_expr()
    if pos[0] != len(toks):
        raise ScalarError(f"trailing input in {text!r}")
    return out


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(int(text[i:j]))
            i = j
        elif c in "+-*/^()q":
            toks.append(c)
            i += 1
        else:
            raise ScalarError(f"bad character {c!r} in scalar {text!r}")
    return toks


# ---------------------------------------------------------------------------
# Rational functions in one variable over an arbitrary coefficient field.

class RatField:
    """Field of rational functions base(var).  The base field object only
    needs .zero, .one and elements supporting arithmetic / bool / eq."""

    def __init__(self, base, var="z"):
        self.base = base
        self.var = var
        self.zero = RatFunc(self, {}, {0: base.one}, reduce=False)
        self.one = RatFunc(self, {0: base.one}, {0: base.one}, reduce=False)
        self.gen = RatFunc(self, {1: base.one}, {0: base.one}, reduce=False)

    def __repr__(self):
        return f"RatField({self.base!r}, {self.var})"

    def __eq__(self, other):
        return (isinstance(other, RatField) and other.base == self.base
                and other.var == self.var)

    def const(self, c):
        """Embed a base-field element."""
        return RatFunc(self, {0: c} if c else {}, {0: self.base.one},
                       reduce=False)

    def from_int(self, n):
        return self.const(self.base.from_int(n))

    def from_fraction(self, c):
        return self.const(self.base.from_fraction(c))

    def embed(self, x):
        """Recursively coerce x from any level of the base-field tower."""
        if isinstance(x, RatFunc) and x.field == self:
            return x
        return self.const(self.base.embed(x))

    def gen_pow(self, n):
        if n >= 0:
            return RatFunc(self, {n: self.base.one}, {0: self.base.one},
                           reduce=False)
        return RatFunc(self, {0: self.base.one}, {-n: self.base.one},
                       reduce=False)


def _vadd(a, b):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        w = v if w is None else w + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _vmul(a, b):
    out = {}
    for i, c in a.items():
        for j, d in b.items():
            k = i + j
            w = out.get(k)
            t = c * d
            w = t if w is None else w + t
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def _vnormalize(field, num, den):
    """Strip the common power of the variable and make the denominator
    monic, without any gcd computation."""
    num = {k: v for k, v in num.items() if v}
    den = {k: v for k, v in den.items() if v}
    if not den:
        raise ZeroDivisionError("rational function division by zero")
    if not num:
        return {}, {0: field.base.one}
    vshift = min(min(num), min(den))
    if vshift:
        num = {k - vshift: v for k, v in num.items()}
        den = {k - vshift: v for k, v in den.items()}
    lead = den[max(den)]
    if not (lead == field.base.one):
        num = {k: v / lead for k, v in num.items()}
        den = {k: v / lead for k, v in den.items()}
    return num, den


_VGCD_CACHE = {}


def _vgcd(field, a, b):
    """Monic gcd of polynomial dicts with coefficients in a field.
    Memoized (coefficient elements are canonical and hashable)."""
    try:
        key = (tuple(sorted(a.items())), tuple(sorted(b.items())))
        hit = _VGCD_CACHE.get(key)
        if hit is not None:
            return hit
    except TypeError:
        key = None
    if _vgcd_coprime_mod(a, b):
        g = {0: field.base.one}
    else:
        g = _vgcd_compute(field, a, b)
    if key is not None:
        if len(_VGCD_CACHE) > 100000:
            _VGCD_CACHE.clear()
        _VGCD_CACHE[key] = g
    return g


def _vgcd_compute(field, a, b):
    zero = field.base.zero

    def mklist(d):
        deg = max(d)
        return [d.get(i, zero) for i in range(deg + 1)]

    def divmod_(x, y):
        x = list(x)
        dy = len(y) - 1
        ly = y[-1]
        while len(x) - 1 >= dy and any(bool(c) for c in x):
            while x and not x[-1]:
                x.pop()
            if len(x) - 1 < dy:
                break
            c = x[-1] / ly
            k = len(x) - 1 - dy
            for i in range(dy + 1):
                x[k + i] = x[k + i] - c * y[i]
            x.pop()
        while x and not x[-1]:
            x.pop()
        return x

    la, lb = mklist(a), mklist(b)
    while lb:
        # keep the divisor monic to tame coefficient growth in the
        # remainder sequence
        lead = lb[-1]
        if not (lead == field.base.one):
            inv = field.base.one / lead
            lb = [c * inv for c in lb]
        la, lb = lb, divmod_(la, lb)
    lead = la[-1]
    la = [c / lead for c in la]
    return {i: c for i, c in enumerate(la) if c}


class RatFunc:
    """num/den of ordinary polynomials (dict deg -> base elem) in one var."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, reduce=True):
        self.field = field
        if reduce:
            num, den = self._reduce(field, num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(field, num, den):
        den = {k: v for k, v in den.items() if v}
        num = {k: v for k, v in num.items() if v}
        if not den:
            raise ZeroDivisionError("rational function division by zero")
        if not num:
            return {}, {0: field.base.one}
        g = _vgcd(field, num, den)
        if len(g) > 1 or min(g) != 0:
            num = _vdiv_exact(field, num, g)
            den = _vdiv_exact(field, den, g)
        # strip common power of the variable
        vshift = min(min(num), min(den))
        if vshift:
            num = {k - vshift: v for k, v in num.items()}
            den = {k - vshift: v for k, v in den.items()}
        # monic denominator
        lead = den[max(den)]
        if not (lead == field.base.one):
            num = {k: v / lead for k, v in num.items()}
            den = {k: v / lead for k, v in den.items()}
        return num, den

    def _chk(self, other):
        if isinstance(other, RatFunc) and other.field == self.field:
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        # allow base-field elements
        return self.field.const(other)

    def __add__(self, other):
        o = self._chk(other)
        f = self.field
        if self.den == o.den:
            num = _vadd(self.num, o.num)
            if len(self.den) == 1 and self.den.get(0) == f.base.one:
                return RatFunc(f, num, self.den, reduce=False)
            return RatFunc(f, num, self.den)
        # lcm-denominator addition: any common factor of the result
        # divides g = gcd of the two denominators, so only small gcds
        # are ever computed
        g = _vgcd(f, self.den, o.den)
        if len(g) == 1 and 0 in g:
            num = _vadd(_vmul(self.num, o.den), _vmul(o.num, self.den))
            den = _vmul(self.den, o.den)
        else:
            da = _vdiv_exact(f, self.den, g)
            db = _vdiv_exact(f, o.den, g)
            num = _vadd(_vmul(self.num, db), _vmul(o.num, da))
            den = _vmul(self.den, db)
            if num:
                h = _vgcd(f, num, g)
                if len(h) > 1 or min(h) != 0:
                    num = _vdiv_exact(f, num, h)
                    den = _vdiv_exact(f, den, h)
        num, den = _vnormalize(f, num, den)
        return RatFunc(f, num, den, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, {k: -v for k, v in self.num.items()},
                       self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._chk(other))

    def __rsub__(self, other):
        return self._chk(other) - self

    def __mul__(self, other):
        o = self._chk(other)
        one = self.field.base.one
        if len(self.den) == 1 and self.den.get(0) == one \
                and len(o.den) == 1 and o.den.get(0) == one:
            return RatFunc(self.field, _vmul(self.num, o.num), self.den,
                           reduce=False)
        # cross-reduce before multiplying to keep degrees low; the result
        # of multiplying the two coprime pairs needs no further gcd
        a = RatFunc(self.field, self.num, o.den)
        b = RatFunc(self.field, o.num, self.den)
        num, den = _vnormalize(self.field, _vmul(a.num, b.num),
                               _vmul(a.den, b.den))
        return RatFunc(self.field, num, den, reduce=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._chk(other)
        if not o.num:
            raise ZeroDivisionError
        a = RatFunc(self.field, self.num, o.num)
        b = RatFunc(self.field, o.den, self.den)
        num, den = _vnormalize(self.field, _vmul(a.num, b.num),
                               _vmul(a.den, b.den))
        return RatFunc(self.field, num, den, reduce=False)

    def __rtruediv__(self, other):
        return self._chk(other) / self

    def inv(self):
        return 1 / self

    def __pow__(self, n):
        if n < 0:
            return (1 / self) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        try:
            o = self._chk(other)
        except Exception:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())),
                     tuple(sorted(self.den.items()))))

    def size(self):
        return sum(getattr(v, "size", lambda: 1)() for v in self.num.values()) \
            + sum(getattr(v, "size", lambda: 1)() for v in self.den.values())

    def subst(self, value, embed=None):
        """Evaluate at var = value, mapping coefficients through embed.

        value lives in any field with compatible arithmetic; embed maps base
        coefficients into that field (default: identity)."""
        if embed is None:
            embed = lambda c: c
        def ev(d):
            out = None
            for k in sorted(d):
                t = embed(d[k]) * value ** k
                out = t if out is None else out + t
            return out
        nv = ev(self.num)
        dv = ev(self.den)
        if nv is None:
            return dv - dv if dv is not None else None
        return nv / dv

    def series(self, order, field=None):
        """Truncated Laurent expansion at var = 0 up to (excl.) z^order."""
        base = self.field.base
        if not self.num:
            return TruncSeries(base, {}, order, self.field.var)
        vn = min(self.num)
        vd = min(self.den)
        lo = vn - vd
        # den = z^vd * (c0 + c1 z + ...), invert the unit part
        unit = {k - vd: v for k, v in self.den.items()}
        c0 = unit[0]
        terms_needed = order - lo
        inv = {0: base.one / c0}
        for n in range(1, max(terms_needed, 0) + 1):
            acc = None
            for k in range(1, n + 1):
                if k in unit and (n - k) in inv:
                    t = unit[k] * inv[n - k]
                    acc = t if acc is None else acc + t
            if acc is not None:
                v = -(acc / c0)
                if v:
                    inv[n] = v
        shifted_num = {k - vd: v for k, v in self.num.items()}
        coeffs = {}
        for i, c in shifted_num.items():
            for j, d in inv.items():
                k = i + j
                if k >= order:
                    continue
                t = c * d
                w = coeffs.get(k)
                w = t if w is None else w + t
                if w:
                    coeffs[k] = w
                else:
                    coeffs.pop(k, None)
        return TruncSeries(base, coeffs, order, self.field.var)

    def __repr__(self):
        var = self.field.var

        def ps(d):
            terms = []
            for k in sorted(d, reverse=True):
                c = d[k]
                cs = repr(c)
                if k == 0:
                    terms.append(cs)
                else:
                    p = var if k == 1 else f"{var}^{k}"
                    if cs == "1":
                        terms.append(p)
                    elif ("+" in cs or "-" in cs[1:] or "/" in cs):
                        terms.append(f"({cs})*{p}")
                    else:
                        terms.append(f"{cs}*{p}")
            return " + ".join(terms) if terms else "0"

        n = ps(self.num)
        if self.den == {0: self.field.base.one}:
            return n
        return f"({n})/({ps(self.den)})"


def _vdiv_exact(field, a, b):
    va = min(a) if a else 0
    vb = min(b)
    a = {k - va: v for k, v in a.items()}
    b = {k - vb: v for k, v in b.items()}
    da, db = max(a), max(b)
    out = {}
    rem = dict(a)
    lb = b[db]
    for k in range(da - db, -1, -1):
        c = rem.get(k + db)
        if c is None or not c:
            continue
        c = c / lb
        out[k] = c
        for i, v in b.items():
            j = k + i
            w = rem.get(j)
            t = c * v
            w = -t if w is None else w - t
            if w:
                rem[j] = w
            else:
                rem.pop(j, None)
    if any(bool(v) for v in rem.values()):
        raise ScalarError("non-exact division")
    return {k + va - vb: v for k, v in out.items() if v}


class TruncSeries:
    """Laurent series truncated at (excl.) a fixed order; coefficients in an
    arbitrary field."""

    __slots__ = ("base", "coeffs", "order", "var")

    def __init__(self, base, coeffs, order, var="z"):
        self.base = base
        self.coeffs = {k: v for k, v in coeffs.items() if v and k < order}
        self.order = order
        self.var = var

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            order = min(self.order, other.order)
            return TruncSeries(self.base, _vadd(self.coeffs, other.coeffs),
                               order, self.var)
        return self + TruncSeries(self.base, {0: other} if other else {},
                                  self.order, self.var)

    def __neg__(self):
        return TruncSeries(self.base, {k: -v for k, v in self.coeffs.items()},
                           self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            order = min(self.order, other.order)
            out = {}
            for i, c in self.coeffs.items():
                for j, d in other.coeffs.items():
                    k = i + j
                    if k >= order:
                        continue
                    t = c * d
                    w = out.get(k)
                    w = t if w is None else w + t
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
            return TruncSeries(self.base, out, order, self.var)
        return TruncSeries(self.base,
                           {k: v * other for k, v in self.coeffs.items()},
                           self.order, self.var)

    __rmul__ = __mul__

    def inv(self):
        """Inverse of a series whose lowest term is invertible."""
        if not self.coeffs:
            raise ZeroDivisionError
        lo = min(self.coeffs)
        c0 = self.coeffs[lo]
        n_terms = self.order - lo
        unit = {k - lo: v for k, v in self.coeffs.items()}
        inv = {0: self.base.one / c0}
        for n in range(1, n_terms):
            acc = None
            for k in range(1, n + 1):
                if k in unit and (n - k) in inv:
                    t = unit[k] * inv[n - k]
                    acc = t if acc is None else acc + t
            if acc is not None:
                v = -(acc / c0)
                if v:
                    inv[n] = v
        return TruncSeries(self.base,
                           {k - lo: v for k, v in inv.items()},
                           self.order - 2 * lo, self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inv()
        return TruncSeries(self.base,
                           {k: v / other for k, v in self.coeffs.items()},
                           self.order, self.var)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        order = min(self.order, other.order)
        a = {k: v for k, v in self.coeffs.items() if k < order}
        b = {k: v for k, v in other.coeffs.items() if k < order}
        return a == b

    def min_order(self):
        return min(self.coeffs) if self.coeffs else self.order

    def __repr__(self):
        terms = []
        for k in sorted(self.coeffs):
            terms.append(f"({self.coeffs[k]!r})*{self.var}^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order})"


# ---------------------------------------------------------------------------
# Modular coprimality certificates.  Specializing all variables at fixed
# points over a large prime field maps a polynomial pair to F_p[z]; when
# the leading coefficients survive, the specialized gcd degree bounds the
# true gcd degree from above, so degree 0 proves coprimality without any
# exact remainder sequence.

_MOD_POINT_SETS = (
    (1103515245, 1299709, 15485863, 32452843),
    (1300981, 22801763489, 104395301, 492876847),
    (179424673, 2038074743, 86028121, 15487469),
)


def _field_depth(f):
    d = 0
    while isinstance(f, RatField):
        d += 1
        f = f.base
    return d


def _modpow(t, k, p):
    if k >= 0:
        return pow(t, k, p)
    return pow(pow(t, p - 2, p), -k, p)


def _modfrac(c, p):
    c = Fraction(c)
    d = c.denominator % p
    if not d:
        return None
    return c.numerator % p * pow(d, p - 2, p) % p


def _modeval_elem(x, p, pts):
    if isinstance(x, RatFunc):
        lvl = _field_depth(x.field)
        n = _modeval_poly(x.num, p, pts, lvl)
        d = _modeval_poly(x.den, p, pts, lvl)
        if n is None or d is None or not d:
            return None
        return n * pow(d, p - 2, p) % p
    if isinstance(x, Scalar):
        n = _modeval_poly(x.num, p, pts, 0)
        d = _modeval_poly(x.den, p, pts, 0)
        if n is None or d is None or not d:
            return None
        return n * pow(d, p - 2, p) % p
    return _modfrac(x, p)


def _modeval_poly(d, p, pts, lvl):
    if lvl >= len(pts):
        return None
    t = pts[lvl]
    acc = 0
    for k, c in d.items():
        if isinstance(c, (int, Fraction)):
            cv = _modfrac(c, p)
        else:
            cv = _modeval_elem(c, p, pts)
        if cv is None:
            return None
        acc = (acc + cv * _modpow(t, k, p)) % p
    return acc


def _vgcd_coprime_mod(a, b):
    """True when the polynomial dicts (coefficients in any supported
    field) are provably coprime."""
    p = _GCD_PRIME
    da, db = max(a), max(b)
    for pts in _MOD_POINT_SETS:
        la = _modeval_elem(a[da], p, pts)
        lb = _modeval_elem(b[db], p, pts)
        if la is None or lb is None or not la or not lb:
            continue
        A = []
        bad = False
        for i in range(da + 1):
            v = a.get(i)
            if v is None or not v:
                A.append(0)
                continue
            cv = _modeval_elem(v, p, pts)
            if cv is None:
                bad = True
                break
            A.append(cv)
        if bad:
            continue
        B = []
        for i in range(db + 1):
            v = b.get(i)
            if v is None or not v:
                B.append(0)
                continue
            cv = _modeval_elem(v, p, pts)
            if cv is None:
                bad = True
                break
            B.append(cv)
        if bad:
            continue
        return _mod_gcd_degree(A, B, p) == 0
    return False

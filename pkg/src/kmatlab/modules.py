"""Finite-dimensional weight modules.

A WeightModule stores, for a fixed root datum, the list of weights of an
ordered basis together with sparse matrices for the Chevalley generators.
Matrix entries live in a configurable coefficient domain (the ground field
itself, or a rational-function field over it for spectral parameters);
q-powers coming from the Cartan part are embedded through the domain.

Irreducible highest-weight modules are built from a height-truncated Verma
module by quotienting out the radical of the contravariant form, computed
exactly.  Dimensions are cross-checked against the Weyl dimension formula.
"""

from fractions import Fraction

from .linalg import Mat, LinAlgError
from .scalars import q_int
from .cartan import CartanError


class ModuleError(Exception):
    pass


class WeightModule:
    def __init__(self, rd, sfield, domain, weights, Emats, Fmats, label=""):
        self.rd = rd
        self.sfield = sfield      # underlying ScalarField (owns q-powers)
        self.domain = domain      # coefficient field of the matrices
        self.weights = list(weights)
        self.dim = len(self.weights)
        self.Emats = Emats        # {i: Mat}
        self.Fmats = Fmats
        self.label = label

    def __repr__(self):
        return f"WeightModule({self.label!r}, dim={self.dim})"

    # -- scalars -------------------------------------------------------------
    def qpow(self, r):
        return self.domain.embed(self.sfield.q_pow(r))

    # -- generator actions ---------------------------------------------------
    def E(self, i):
        return self.Emats[i]

    def F(self, i):
        return self.Fmats[i]

    def K(self, hcoords):
        """K_h for h = sum hcoords[i] h_i (integer coroot coordinates)."""
        vals = []
        for wt in self.weights:
            e = sum(Fraction(c) * wt[j] for j, c in enumerate(hcoords))
            vals.append(self.qpow(e))
        return Mat.diagonal(vals, self.domain)

    def Ki(self, i, power=1):
        h = [0] * self.rd.n
        h[i] = self.rd.d[i] * power
        return self.K(h)

    def weight_diag(self, expfun):
        """Diagonal operator q^(expfun(wt)) over the basis weights."""
        return Mat.diagonal([self.qpow(expfun(wt)) for wt in self.weights],
                            self.domain)

    def weight_spaces(self):
        out = {}
        for idx, wt in enumerate(self.weights):
            out.setdefault(wt, []).append(idx)
        return out

    # -- functors ------------------------------------------------------------
    def tensor(self, other, label=None):
        """Tensor product with the coproduct
        E_i -> E_i x 1 + K_i x E_i,  F_i -> F_i x Kinv_i + 1 x F_i."""
        rd = self.rd
        dom = self.domain
        weights = [rd.wt_add(a, b) for a in self.weights
                   for b in other.weights]
        idA = Mat.identity(self.dim, dom)
        idB = Mat.identity(other.dim, dom)
        Em, Fm = {}, {}
        for i in set(self.Emats) | set(other.Emats):
            Em[i] = self.E(i).tensor(idB) + self.Ki(i).tensor(other.E(i))
            Fm[i] = self.F(i).tensor(other.Ki(i, -1)) + idA.tensor(other.F(i))
        lab = label or f"({self.label})x({other.label})"
        return WeightModule(rd, self.sfield, dom, weights, Em, Fm, lab)

    def pullback_chevalley_twist(self, tau, label=None):
        """Pullback along the algebra automorphism
        E_i -> -F_{tau(i)}, F_i -> -E_{tau(i)}, K_h -> K_{-tau(h)}."""
        rd = self.rd
        Em = {i: -self.F(tau[i]) for i in self.Emats}
        Fm = {i: -self.E(tau[i]) for i in self.Fmats}
        weights = [tuple(-wt[tau[j]] for j in rd.I) for wt in self.weights]
        lab = label or f"wtau*({self.label})"
        return WeightModule(rd, self.sfield, self.domain, weights, Em, Fm,
                            lab)

    def conjugate(self, g, ginv=None, label=None):
        """Pullback along Ad(g^{-1}): generator matrices become
        g . m . g^{-1}.  g must preserve weight spaces."""
        if ginv is None:
            ginv = g.inverse()
        Em = {i: g * self.E(i) * ginv for i in self.Emats}
        Fm = {i: g * self.F(i) * ginv for i in self.Fmats}
        ws = self.weight_spaces()
        for i, j, _ in g.entries():
            if self.weights[i] != self.weights[j]:
                raise ModuleError("conjugating operator is not "
                                  "weight-preserving")
        lab = label or f"conj({self.label})"
        return WeightModule(self.rd, self.sfield, self.domain, self.weights,
                            Em, Fm, lab)

    def with_domain(self, domain, embed=None, label=None):
        """Extend coefficients into a larger domain."""
        if embed is None:
            embed = domain.embed
        Em = {i: m.apply(embed, domain) for i, m in self.Emats.items()}
        Fm = {i: m.apply(embed, domain) for i, m in self.Fmats.items()}
        return WeightModule(self.rd, self.sfield, domain, self.weights,
                            Em, Fm, label or self.label)

    def export(self):
        """Plain-data description of the module."""
        def mat_entries(m):
            return sorted([[i, j, repr(v)] for i, j, v in m.entries()])
        return {
            "label": self.label,
            "dim": self.dim,
            "weights": [[str(c) for c in wt] for wt in self.weights],
            "E": {str(i): mat_entries(m) for i, m in
                  sorted(self.Emats.items())},
            "F": {str(i): mat_entries(m) for i, m in
                  sorted(self.Fmats.items())},
        }


def trivial_module(rd, sfield, domain=None):
    dom = domain or sfield
    z = Mat.zero(1, 1, dom)
    return WeightModule(rd, sfield, dom, [rd.zero_wt()],
                        {i: z.copy() for i in rd.I},
                        {i: z.copy() for i in rd.I}, label="trivial")


# ---------------------------------------------------------------------------
# Relation checker

def check_uqg_relations(mod, gens=None):
    """Verify the defining relations of the quantized enveloping algebra on
    the module: weight compatibility of E_i/F_i, the commutator relation
    [E_i, F_j], and both families of q-Serre relations.  Returns a list of
    (name, ok) pairs."""
    rd = mod.rd
    dom = mod.domain
    gens = sorted(mod.Emats) if gens is None else gens
    results = []

    # weight compatibility
    ok = True
    for i in gens:
        ai = rd.alpha(i)
        for r, c, _ in mod.E(i).entries():
            if mod.weights[r] != rd.wt_add(mod.weights[c], ai):
                ok = False
        for r, c, _ in mod.F(i).entries():
            if mod.weights[r] != rd.wt_sub(mod.weights[c], ai):
                ok = False
    results.append(("weight-compatibility", ok))

    # [E_i, F_j] = delta_ij (K_i - Kinv_i)/(q_i - q_i^{-1})
    ok = True
    for i in gens:
        qi = mod.qpow(rd.d[i])
        denom = qi - mod.qpow(-rd.d[i])
        for j in gens:
            lhs = mod.E(i) * mod.F(j) - mod.F(j) * mod.E(i)
            if i == j:
                rhs = (mod.Ki(i) - mod.Ki(i, -1)).apply(
                    lambda v: v / denom)
            else:
                rhs = Mat.zero(mod.dim, mod.dim, dom)
            if lhs != rhs:
                ok = False
    results.append(("ef-commutator", ok))

    # q-Serre
    ok = True
    for i in gens:
        for j in gens:
            if i == j:
                continue
            if not serre_element(mod, i, j, "E").is_zero():
                ok = False
            if not serre_element(mod, i, j, "F").is_zero():
                ok = False
    results.append(("q-serre", ok))
    return results


def serre_element(mod, i, j, kind="E", Xi=None, Xj=None):
    """S_ij(x_i, x_j) = sum_r (-1)^r [1-a_ij choose r]_{q_i}
    x_i^{1-a_ij-r} x_j x_i^r evaluated on the module."""
    from .scalars import q_binom
    rd = mod.rd
    n = 1 - rd.A[i][j]
    if Xi is None:
        Xi = mod.E(i) if kind == "E" else mod.F(i)
    if Xj is None:
        Xj = mod.E(j) if kind == "E" else mod.F(j)
    pows = [Mat.identity(mod.dim, mod.domain)]
    for _ in range(n):
        pows.append(Xi * pows[-1])
    out = Mat.zero(mod.dim, mod.dim, mod.domain)
    for r in range(n + 1):
        c = mod.domain.embed(q_binom(mod.sfield, n, r, rd.d[i]))
        term = (pows[n - r] * Xj * pows[r]).scale(c)
        out = out + term if r % 2 == 0 else out - term
    return out


# ---------------------------------------------------------------------------
# Irreducible highest-weight modules (finite type)

def irrep(rd, sfield, lam, label=None):
    """Simple module of highest weight lam, built from the contravariant
    form on a truncated Verma module."""
    lam = tuple(Fraction(x) for x in lam)
    for i in rd.I:
        if lam[i].denominator != 1 or lam[i] < 0:
            raise ModuleError("highest weight must be dominant integral")
    w0 = rd.longest_word(rd.I)
    low = rd.word_on_wt(w0, lam)
    drop = rd.classical_root_coords(rd.wt_sub(lam, low))
    H = sum(drop.values())
    if H.denominator != 1:
        raise ModuleError("non-integral height")
    H = int(H)

    # all words in the alphabet I of length <= H, grouped by weight
    words_by_wt = {lam: [()]}
    frontier = [()]
    for _ in range(H):
        new = []
        for w in frontier:
            for i in rd.I:
                w2 = (i,) + w
                new.append(w2)
        frontier = new
        for w in frontier:
            wt = _word_weight(rd, lam, w)
            words_by_wt.setdefault(wt, []).append(w)

    ctx = _VermaCtx(rd, sfield, lam)

    # choose basis words per weight from the Gram rank
    basis = []       # list of (weight, [words])
    for wt, words in words_by_wt.items():
        gram = [[ctx.pair(a, b) for b in words] for a in words]
        chosen = _independent_columns(gram, words, sfield)
        if chosen:
            basis.append((wt, chosen))

    # order: by height ascending (highest weight first), then word order
    def height(wt):
        c = rd.classical_root_coords(rd.wt_sub(lam, wt))
        return sum(c.values())
    basis.sort(key=lambda p: (height(p[0]), p[1]))

    flat = []
    index = {}
    weights = []
    for wt, words in basis:
        for w in words:
            index[w] = len(flat)
            flat.append((wt, w))
            weights.append(wt)
    dim = len(flat)
    expected = rd.weyl_dim(lam)
    if dim != expected:
        raise ModuleError(
            f"dimension {dim} does not match Weyl formula {expected}")

    gram_cache = {}

    def gram_solve(wt, rhs_fun):
        words = dict(basis)[wt]
        key = wt
        if key not in gram_cache:
            g = [[ctx.pair(a, b) for b in words] for a in words]
            gram_cache[key] = (words, _inv_dense(g, sfield))
        words, ginv = gram_cache[key]
        rhs = [rhs_fun(b) for b in words]
        return words, [sum((ginv[r][c] * rhs[c] for c in range(len(words))),
                           sfield.zero) for r in range(len(words))]

    wt_index = dict(basis)
    Em = {i: Mat(dim, dim, sfield) for i in rd.I}
    Fm = {i: Mat(dim, dim, sfield) for i in rd.I}
    for wt, words in basis:
        for w in words:
            col = index[w]
            for i in rd.I:
                # F_i w
                tgt = rd.wt_sub(wt, rd.alpha(i))
                if tgt in wt_index:
                    bw, coeffs = gram_solve(
                        tgt, lambda b: ctx.pair(b, (i,) + w))
                    for b, c in zip(bw, coeffs):
                        if c:
                            Fm[i].set(index[b], col, c)
                # E_i w: <b, E_i w> = <F_i b, w>
                tgt = rd.wt_add(wt, rd.alpha(i))
                if tgt in wt_index:
                    bw, coeffs = gram_solve(
                        tgt, lambda b: ctx.pair((i,) + b, w))
                    for b, c in zip(bw, coeffs):
                        if c:
                            Em[i].set(index[b], col, c)
    lab = label or "V(" + ",".join(str(x) for x in lam) + ")"
    return WeightModule(rd, sfield, sfield, weights, Em, Fm, lab)


def _word_weight(rd, lam, w):
    wt = lam
    for i in w:
        wt = rd.wt_sub(wt, rd.alpha(i))
    return wt


class _VermaCtx:
    """Contravariant-form computations on the Verma module M(lam)."""

    def __init__(self, rd, sfield, lam):
        self.rd = rd
        self.sfield = sfield
        self.lam = lam
        self._pair_cache = {}
        self._e_cache = {}

    def apply_E(self, i, word):
        """E_i acting on the Verma basis vector F_word v, as a dict
        {word: Scalar}."""
        key = (i, word)
        out = self._e_cache.get(key)
        if out is not None:
            return out
        if not word:
            out = {}
        else:
            j, rest = word[0], word[1:]
            out = {}
            for w2, c in self.apply_E(i, rest).items():
                out2 = (j,) + w2
                out[out2] = out.get(out2, self.sfield.zero) + c
            if i == j:
                mu = _word_weight(self.rd, self.lam, rest)
                n = mu[i]
                if n.denominator != 1:
                    raise ModuleError("non-integral weight pairing")
                c = q_int(self.sfield, int(n), self.rd.d[i])
                if c:
                    out[rest] = out.get(rest, self.sfield.zero) + c
            out = {w: v for w, v in out.items() if v}
        self._e_cache[key] = out
        return out

    def pair(self, w1, w2):
        """<F_{w1} v, F_{w2} v> for the contravariant form with
        <F_i x, y> = <x, E_i y>."""
        key = (w1, w2)
        out = self._pair_cache.get(key)
        if out is not None:
            return out
        if not w1:
            out = self.sfield.one if not w2 else self.sfield.zero
        elif not w2:
            out = self.sfield.zero
        else:
            i, rest = w1[0], w1[1:]
            acc = self.sfield.zero
            for w, c in self.apply_E(i, w2).items():
                acc = acc + c * self.pair(rest, w)
            out = acc
        self._pair_cache[key] = out
        return out


def _independent_columns(gram, words, field):
    """Greedy choice of words giving an invertible Gram block."""
    chosen = []
    rows = []        # reduced rows of the chosen columns (over all words)
    n = len(words)
    for c in range(n):
        col = {r: gram[r][c] for r in range(n) if gram[r][c]}
        red = dict(col)
        for pc, prow in rows:
            v = red.get(pc)
            if v:
                red = _sub_scaled(red, prow, v)
        if red:
            pc = min(red)
            inv = field.one / red[pc]
            red = {k: v * inv for k, v in red.items()}
            rows.append((pc, red))
            chosen.append(words[c])
    return chosen


def _sub_scaled(r, row, c):
    out = dict(r)
    for j, v in row.items():
        t = c * v
        cur = out.get(j)
        cur = -t if cur is None else cur - t
        if cur:
            out[j] = cur
        else:
            out.pop(j, None)
    return out


def _inv_dense(g, field):
    n = len(g)
    a = [[g[i][j] for j in range(n)] +
         [field.one if i == j else field.zero for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# Evaluation modules for affine sl2

def evaluation_sl2hat(rd, sfield, n, a, domain=None, label=None):
    """(n+1)-dimensional evaluation module: the classical generators act as
    on the sl2 module V(n omega); E_0 acts as a * F_1 and F_0 as a^{-1} *
    E_1, with K_0 = K_1^{-1} (so K_delta acts as the identity).  The
    evaluation parameter a lives in the coefficient domain."""
    if not rd.affine or rd.n != 2:
        raise ModuleError("evaluation modules require the affine sl2 datum")
    dom = domain or sfield
    a = dom.embed(a)
    dim = n + 1
    weights = []
    for k in range(dim):
        m = n - 2 * k
        weights.append((Fraction(-m), Fraction(m)))
    E1 = Mat(dim, dim, dom)
    F1 = Mat(dim, dim, dom)
    for k in range(1, dim):
        # F v_k-1 = v_k ; E v_k = [k][n-k+1] v_{k-1}
        F1.set(k, k - 1, dom.one)
        c = q_int(sfield, k) * q_int(sfield, n - k + 1)
        E1.set(k - 1, k, dom.embed(c))
    E0 = F1.scale(a)
    F0 = E1.scale(dom.one / a)
    lab = label or f"W{n}(a)"
    return WeightModule(rd, sfield, dom, weights, {0: E0, 1: E1},
                        {0: F0, 1: F1}, lab)

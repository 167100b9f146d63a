"""Quasi R-matrices and R-matrix identities on pairs of weight modules.

The R-matrix on V x W is kappa . Theta where kappa is the diagonal weight
operator q^((wt_V, wt_W)) and Theta is the unique triangular intertwiner
with identity degree-zero part.  Theta is found by an exact constrained
linear solve; uniqueness of the constrained solution space is verified.
"""

from fractions import Fraction

from .linalg import Mat, nullspace, solve_linear, NoSolution, \
    NonUniqueSolution
from .modules import WeightModule


class RMatrixError(Exception):
    pass


# ---------------------------------------------------------------------------
# Structural helpers

def flip_mat(dA, dB, field):
    """The flip A x B -> B x A as a matrix."""
    out = Mat(dA * dB, dA * dB, field)
    for a in range(dA):
        for b in range(dB):
            out.set(b * dA + a, a * dB + b, field.one)
    return out


def embed_legs(op, dims, i, j, field):
    """Embed a two-leg operator (acting on legs i then j, i != j) into the
    tensor product with leg dimensions dims."""
    n = len(dims)
    strides = [1] * n
    for k in range(n - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    rest = [k for k in range(n) if k not in (i, j)]

    def rest_indices():
        idx = [0] * len(rest)
        while True:
            yield idx
            for p in range(len(rest) - 1, -1, -1):
                idx[p] += 1
                if idx[p] < dims[rest[p]]:
                    break
                idx[p] = 0
            else:
                return

    out = Mat(_prod(dims), _prod(dims), field)
    entries = list(op.entries())
    if not entries:
        return out
    rest_offsets = []
    if rest:
        for idx in rest_indices():
            rest_offsets.append(sum(strides[rest[p]] * idx[p]
                                    for p in range(len(rest))))
    else:
        rest_offsets = [0]
    dj = dims[j]
    for r, c, v in entries:
        ri, rj = divmod(r, dj)
        ci, cj = divmod(c, dj)
        base_r = ri * strides[i] + rj * strides[j]
        base_c = ci * strides[i] + cj * strides[j]
        for off in rest_offsets:
            out.set(base_r + off, base_c + off, v)
    return out


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def weight_operator(V, W, f):
    """kappa_f: diagonal q^((f(wt_V), wt_W)) on V x W.  f maps weight
    functionals to weight functionals and must be self-adjoint for the
    invariant pairing; this is checked on the occurring weights."""
    rd = V.rd
    wtsV = V.weights
    wtsW = W.weights
    for a in wtsV[:4]:
        for b in wtsW[:4]:
            if rd.pairing(f(a), b) != rd.pairing(a, f(b)):
                raise RMatrixError("weight map is not self-adjoint")
    vals = []
    for a in wtsV:
        fa = f(a)
        for b in wtsW:
            vals.append(V.qpow(rd.pairing(fa, b)))
    return Mat.diagonal(vals, V.domain)


def kappa_id(V, W):
    return weight_operator(V, W, lambda wt: wt)


# ---------------------------------------------------------------------------
# Quasi R-matrix solve

def _support_ok(rd, shift_v, shift_w, X):
    """shift_v = wt_V(col) - wt_V(row) must equal the opposite-leg shift
    and be a nonnegative root-lattice combination (restricted to X when
    given)."""
    if shift_v != shift_w:
        return False
    if rd.affine and X is None:
        # positivity is invisible modulo delta; shifts are unconstrained
        return True
    coords = rd.classical_root_coords(shift_v)
    for i, c in coords.items():
        if c.denominator != 1 or c < 0:
            return False
        if X is not None and c and i not in X:
            return False
    return True


def quasi_R(V, W, X=None, check_unique=True):
    """R-matrix kappa . Theta on V x W.

    X = None uses the full set of generators and support in the positive
    root lattice; a subset X restricts generators and support to the
    parabolic subalgebra (used for the parabolic quasi R-matrix).  Returns
    a dict with keys R, Theta, kappa and the graded support."""
    rd = V.rd
    dom = V.domain
    gens = sorted(V.Emats) if X is None else sorted(X)
    kap = kappa_id(V, W)
    dim = V.dim * W.dim
    if X is not None and len(gens) == 0:
        theta = Mat.identity(dim, dom)
        return {"R": kap, "Theta": theta, "kappa": kap}

    # unknown positions (strictly positive degree); the degree-zero block
    # is pinned to the identity, which makes the system inhomogeneous and
    # the solution unique even on reducible tensor factors
    pos = []
    pos_index = {}
    fixed = {}
    for r in range(dim):
        rv, rw = divmod(r, W.dim)
        for c in range(dim):
            cv, cw = divmod(c, W.dim)
            sv = rd.wt_sub(V.weights[cv], V.weights[rv])
            sw = rd.wt_sub(W.weights[rw], W.weights[cw])
            if not _support_ok(rd, sv, sw, X):
                continue
            if sv == rd.zero_wt():
                fixed[(r, c)] = dom.one if r == c else dom.zero
            else:
                pos_index[(r, c)] = len(pos)
                pos.append((r, c))

    theta = _solve_intertwiner(V, W, pos, pos_index, fixed, kap, gens)
    return {"R": kap * theta, "Theta": theta, "kappa": kap}


def _tensor_gen_mats(V, W, gens):
    """Matrices of Delta(E_i), Delta(F_i) and their opposite-coproduct
    counterparts on V x W."""
    dom = V.domain
    idV = Mat.identity(V.dim, dom)
    idW = Mat.identity(W.dim, dom)
    out = []
    for i in gens:
        dE = V.E(i).tensor(idW) + V.Ki(i).tensor(W.E(i))
        dF = V.F(i).tensor(W.Ki(i, -1)) + idV.tensor(W.F(i))
        # opposite coproduct on V x W
        oE = idV.tensor(W.E(i)) + V.E(i).tensor(W.Ki(i))
        oF = V.F(i).tensor(idW) + V.Ki(i, -1).tensor(W.F(i))
        out.append((dE, oE))
        out.append((dF, oF))
    return out


def _solve_intertwiner(V, W, pos, pos_index, fixed, kap, gens):
    """Solve kappa T Delta(x) = Delta^op(x) kappa T for the entries of T
    at the unknown positions, with the entries at fixed positions pinned.
    Raises if the system is inconsistent or underdetermined."""
    dom = V.domain
    dim = V.dim * W.dim
    rows = {}
    rhs = {}
    kdiag = {r: kap.get(r, r) for r in range(dim)}

    def acc(key, k, t):
        row = rows.setdefault(key, {})
        rhs.setdefault(key, dom.zero)
        cur = row.get(k)
        cur = t if cur is None else cur + t
        if cur:
            row[k] = cur
        else:
            row.pop(k, None)

    def acc_rhs(key, t):
        rows.setdefault(key, {})
        rhs[key] = rhs.get(key, dom.zero) - t

    for gid, (dX, oX) in enumerate(_tensor_gen_mats(V, W, gens)):
        ocols = {}
        for r, m, v in oX.entries():
            ocols.setdefault(m, []).append((r, v))
        # (kap T dX)[r,c] - (oX kap T)[r,c] = 0
        for (r, m), k in pos_index.items():
            for c, v in dX.rows.get(m, {}).items():
                acc((gid, r, c), k, kdiag[r] * v)
        for (m, c), k in pos_index.items():
            for r, v in ocols.get(m, ()):
                acc((gid, r, c), k, -(v * kdiag[m]))
        for (r, m), val in fixed.items():
            if not val:
                continue
            for c, v in dX.rows.get(m, {}).items():
                acc_rhs((gid, r, c), kdiag[r] * v * val)
        for (m, c), val in fixed.items():
            if not val:
                continue
            for r, v in ocols.get(m, ()):
                acc_rhs((gid, r, c), -(v * kdiag[m] * val))
    keys = sorted(rows)
    sol = solve_linear([rows[k] for k in keys], [rhs[k] for k in keys],
                       len(pos), dom)
    T = Mat(dim, dim, dom)
    for (r, c), val in fixed.items():
        T.set(r, c, val)
    for k, v in sol.items():
        r, c = pos[k]
        T.set(r, c, v)
    return T


# ---------------------------------------------------------------------------
# Derived R-matrices

def R_matrix(V, W):
    return quasi_R(V, W)["R"]


def R_theta(V, W, sd):
    """The parabolic R-matrix kappa_theta . Theta_X on V x W."""
    kap = weight_operator(V, W, sd.theta_wt)
    th = quasi_R(V, W, X=sd.X)["Theta"] if sd.X else \
        Mat.identity(V.dim * W.dim, V.domain)
    return kap * th


def R_psi(V, W, psiV):
    """R^psi on V x W: the R-matrix of the pair (V^psi, W) read as an
    operator on the same underlying space."""
    return R_matrix(psiV, W)


def R_psi_21(V, W, psiW):
    """R^psi_21 on V x W: flipped R-matrix of (W^psi, V)."""
    R = R_matrix(psiW, V)
    P = flip_mat(W.dim, V.dim, V.domain)
    Pb = flip_mat(V.dim, W.dim, V.domain)
    return P * R * Pb


def R_21(V, W):
    R = R_matrix(W, V)
    P = flip_mat(W.dim, V.dim, V.domain)
    Pb = flip_mat(V.dim, W.dim, V.domain)
    return P * R * Pb


# ---------------------------------------------------------------------------
# Identity checks

def check_intertwining(V, W, R):
    """R Delta(x) = Delta^op(x) R for all generators."""
    gens = sorted(V.Emats)
    for dX, oX in _tensor_gen_mats(V, W, gens):
        if R * dX != oX * R:
            return False
    return True

def check_coproduct_identities(V, W, U, rfun):
    """(Delta x id)(R) = R13 R23 and (id x Delta)(R) = R13 R12, with the
    left sides computed on the tensor-product module directly."""
    dims3 = (V.dim, W.dim, U.dim)
    dom = V.domain
    # (Delta x id): R on (V x W) x U
    VW = V.tensor(W)
    lhs1 = rfun(VW, U)
    r13 = embed_legs(rfun(V, U), dims3, 0, 2, dom)
    r23 = embed_legs(rfun(W, U), dims3, 1, 2, dom)
    ok1 = lhs1 == r13 * r23
    # (id x Delta): R on V x (W x U)
    WU = W.tensor(U)
    lhs2 = rfun(V, WU)
    r12 = embed_legs(rfun(V, W), dims3, 0, 1, dom)
    ok2 = lhs2 == r13 * r12
    return ok1, ok2


def check_YBE(V1, V2, V3, rfun=None):
    """R12 R13 R23 = R23 R13 R12."""
    rfun = rfun or R_matrix
    dom = V1.domain
    dims = (V1.dim, V2.dim, V3.dim)
    r12 = embed_legs(rfun(V1, V2), dims, 0, 1, dom)
    r13 = embed_legs(rfun(V1, V3), dims, 0, 2, dom)
    r23 = embed_legs(rfun(V2, V3), dims, 1, 2, dom)
    return r12 * r13 * r23 == r23 * r13 * r12


# ---------------------------------------------------------------------------
# Trigonometric (rational in the spectral parameter) R-matrix

def _hw_index(mod):
    """Basis index of the classically highest weight (twisted modules
    carry negated weights, so this need not be index 0)."""
    cl = mod.rd.classical
    return max(range(mod.dim),
               key=lambda k: tuple(mod.weights[k][i] for i in cl))


def trig_R(V, Wz):
    """The unique intertwiner R(z) Delta(x) = Delta^op(x) R(z) on V x W(z)
    for modules over a rational-function domain, normalized so the
    diagonal entry at the highest-weight basis pair is 1 (the eigenvalue
    normalization that makes the family unitary)."""
    dom = V.domain
    dim = V.dim * Wz.dim
    pos = []
    pos_index = {}
    rd = V.rd
    for r in range(dim):
        rv, rw = divmod(r, Wz.dim)
        for c in range(dim):
            cv, cw = divmod(c, Wz.dim)
            sv = rd.wt_sub(V.weights[cv], V.weights[rv])
            sw = rd.wt_sub(Wz.weights[rw], Wz.weights[cw])
            if sv == sw:
                pos_index[(r, c)] = len(pos)
                pos.append((r, c))
    rows = {}

    def acc(key, k, t):
        row = rows.setdefault(key, {})
        cur = row.get(k)
        cur = t if cur is None else cur + t
        if cur:
            row[k] = cur
        else:
            row.pop(k, None)

    for gid, (dX, oX) in enumerate(_tensor_gen_mats(V, Wz, sorted(V.Emats))):
        ocols = {}
        for r, m, v in oX.entries():
            ocols.setdefault(m, []).append((r, v))
        for (r, m), k in pos_index.items():
            for c, v in dX.rows.get(m, {}).items():
                acc((gid, r, c), k, v)
        for (m, c), k in pos_index.items():
            for r, v in ocols.get(m, ()):
                acc((gid, r, c), k, -v)
    basis = nullspace([r for r in rows.values() if r], len(pos), dom)
    if not basis:
        raise NoSolution("no spectral intertwiner")
    if len(basis) != 1:
        raise NonUniqueSolution(
            f"spectral intertwiner space has dimension {len(basis)}")
    T = Mat(dim, dim, dom)
    for k, v in basis[0].items():
        r, c = pos[k]
        T.set(r, c, v)
    h = _hw_index(V) * Wz.dim + _hw_index(Wz)
    c0 = T.get(h, h)
    if not c0:
        raise RMatrixError("vanishing top-weight entry")
    return T.scale(dom.one / c0)


# ---------------------------------------------------------------------------
# Independent rank-one oracle for the quasi R-matrix

def theta_rank1_oracle(V, W, i=0):
    """Closed-form quasi R-matrix for a rank-one pair:
    Theta = sum_n q_i^{n(n-1)/2} (q_i - q_i^{-1})^n / [n]_{q_i}! F^n x E^n."""
    from .scalars import q_factorial
    rd = V.rd
    di = rd.d[i]
    dom = V.domain
    sf = V.sfield
    qi = sf.q_pow(di)
    out = Mat.zero(V.dim * W.dim, V.dim * W.dim, dom)
    Fp = Mat.identity(V.dim, dom)
    Ep = Mat.identity(W.dim, dom)
    n = 0
    while True:
        c = sf.q_pow(Fraction(di * n * (n - 1), 2)) * \
            (qi - qi.inv()) ** n / q_factorial(sf, n, di)
        out = out + Fp.tensor(Ep).scale(dom.embed(c))
        Fp = V.F(i) * Fp
        Ep = W.E(i) * Ep
        n += 1
        if Fp.is_zero() or Ep.is_zero():
            break
    return out

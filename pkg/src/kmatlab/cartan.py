"""Root data, Satake data and the associated involution machinery.

Weights are stored as functionals on the coroots: a weight is a tuple of
Fractions (lambda(h_i))_{i in I}.  For the affine case only level-zero
modules of the derived subalgebra occur, so the scaling-element coordinate
is never carried; the invariant pairing is computed through the classical
part, which is exact on such weights modulo delta (and delta never pairs
nontrivially against them).
"""

from fractions import Fraction
from math import lcm


class CartanError(Exception):
    pass


class InvalidSatakeDatum(CartanError):
    pass


def _frac_tuple(xs):
    return tuple(Fraction(x) for x in xs)


class RootDatum:
    """Symmetrizable (generalized) Cartan datum.

    a[i][j] = alpha_j(h_i);  d[i] symmetrizers with d_i a_ij = d_j a_ji.
    affine=True marks an untwisted affine datum with node 0 the affine
    node; classical nodes are the rest.
    """

    def __init__(self, A, d, affine=False):
        self.n = len(A)
        self.I = tuple(range(self.n))
        self.A = tuple(tuple(int(x) for x in row) for row in A)
        self.d = tuple(int(x) for x in d)
        self.affine = affine
        for i in self.I:
            for j in self.I:
                if self.d[i] * self.A[i][j] != self.d[j] * self.A[j][i]:
                    raise CartanError("non-symmetrizable Cartan matrix")
        self.classical = tuple(i for i in self.I if not (affine and i == 0))
        self.D = self._compute_D()

    # -- standard data -------------------------------------------------------
    @staticmethod
    def finite(series, rank):
        if series == "A":
            A = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                  for j in range(rank)] for i in range(rank)]
            return RootDatum(A, [1] * rank)
        if series == "A1xA1":
            return RootDatum([[2, 0], [0, 2]], [1, 1])
        raise CartanError(f"unsupported series {series}")

    @staticmethod
    def affine_sl2():
        return RootDatum([[2, -2], [-2, 2]], [1, 1], affine=True)

    def _compute_D(self):
        dens = [1]
        cl = self.classical
        m = [[Fraction(self.A[i][j]) for j in cl] for i in cl]
        inv = _mat_inv(m)
        for a, i in enumerate(cl):
            for b, j in enumerate(cl):
                # (omega_i, omega_j) = (A^-1)_{j i} d_j  in classical coords
                dens.append((inv[b][a] * self.d[j]).denominator)
        return 2 * lcm(*dens)

    # -- basic weights -------------------------------------------------------
    def zero_wt(self):
        return (Fraction(0),) * self.n

    def alpha(self, i):
        """Simple root alpha_i as a weight functional."""
        return tuple(Fraction(self.A[j][i]) for j in self.I)

    def fundamental(self, i):
        return tuple(Fraction(1) if j == i else Fraction(0) for j in self.I)

    def wt_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def wt_sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def wt_neg(self, a):
        return tuple(-x for x in a)

    def root_shift(self, wt, coords):
        """wt + sum_i coords[i] alpha_i, coords a dict {i: integer}."""
        out = list(wt)
        for i, c in coords.items():
            ai = self.alpha(i)
            for j in self.I:
                out[j] += c * ai[j]
        return tuple(out)

    # -- pairing -------------------------------------------------------------
    def classical_root_coords(self, wt):
        """Coefficients c with wt = sum c_k alpha_k over classical nodes
        (exact for finite type; modulo delta in the affine level-0 case)."""
        cl = self.classical
        m = [[Fraction(self.A[i][j]) for j in cl] for i in cl]
        rhs = [wt[i] for i in cl]
        sol = _solve_sq(m, rhs)
        return {j: sol[b] for b, j in enumerate(cl)}

    def pairing(self, a, b):
        """Invariant symmetric bilinear form (a, b)."""
        ca = self.classical_root_coords(a)
        out = Fraction(0)
        for k, c in ca.items():
            out += c * self.d[k] * b[k]
        return out

    # -- Weyl group ----------------------------------------------------------
    def reflect_wt(self, i, wt):
        c = wt[i]
        if not c:
            return wt
        ai = self.alpha(i)
        return tuple(w - c * a for w, a in zip(wt, ai))

    def reflect_root_coords(self, i, c):
        """s_i on root coordinates (dict {j: coeff})."""
        pair = sum(v * self.A[i][j] for j, v in c.items())
        out = dict(c)
        if pair:
            out[i] = out.get(i, 0) - pair
            if not out[i]:
                del out[i]
        return out

    def word_on_wt(self, word, wt):
        """Apply s_{i1}...s_{ik} (word = [i1,...,ik]) to a weight."""
        for i in reversed(word):
            wt = self.reflect_wt(i, wt)
        return wt

    def longest_word(self, X):
        """Reduced word for the longest element of the parabolic W_X."""
        mu = tuple(Fraction(1) if i in X else Fraction(0) for i in self.I)
        word = []
        while True:
            for i in X:
                if mu[i] > 0:
                    mu = self.reflect_wt(i, mu)
                    word.append(i)
                    break
            else:
                return word

    def positive_roots(self, X):
        """Positive roots of the sub-datum on X, as root-coordinate dicts."""
        roots = {tuple(sorted({i: 1}.items())): {i: 1} for i in X}
        frontier = list(roots.values())
        while frontier:
            new = []
            for c in frontier:
                for i in X:
                    c2 = self.reflect_root_coords(i, c)
                    if all(v > 0 for v in c2.values()) and c2:
                        key = tuple(sorted(c2.items()))
                        if key not in roots:
                            roots[key] = c2
                            new.append(c2)
            frontier = new
        return list(roots.values())

    def rho_coords(self, X):
        """Half sum of positive roots of X, in root coordinates."""
        out = {}
        for c in self.positive_roots(X):
            for i, v in c.items():
                out[i] = out.get(i, 0) + Fraction(v, 2)
        return out

    def pair_with_root_combo(self, wt, coords):
        """(wt, sum coords_i alpha_i)."""
        out = Fraction(0)
        for i, c in coords.items():
            out += c * self.d[i] * wt[i]
        return out

    def root_norm(self, coords):
        """(beta, beta) for beta = sum coords_i alpha_i."""
        out = Fraction(0)
        for i, ci in coords.items():
            for j, cj in coords.items():
                out += ci * cj * self.d[i] * self.A[i][j]
        return out

    def coroot_of(self, coords):
        """Coroot coordinates of beta^vee for a root beta (root coords)."""
        db = self.root_norm(coords) / 2
        return {i: Fraction(c * self.d[i], 1) / db for i, c in coords.items()}

    def weyl_dim(self, lam):
        """Weyl dimension formula (finite type)."""
        if self.affine:
            raise CartanError("dimension formula needs finite type")
        rho = tuple(Fraction(1) for _ in self.I)
        num = den = Fraction(1)
        for beta in self.positive_roots(self.I):
            lr = self.pair_with_root_combo(
                tuple(a + b for a, b in zip(lam, rho)), beta)
            rr = self.pair_with_root_combo(rho, beta)
            num *= lr
            den *= rr
        val = num / den
        if val.denominator != 1:
            raise CartanError("non-integral Weyl dimension")
        return int(val)


def _mat_inv(m):
    n = len(m)
    a = [row[:] + [Fraction(1) if i == j else Fraction(0)
                   for j in range(n)] for i, row in enumerate(m)]
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


def _solve_sq(m, rhs):
    inv = _mat_inv(m)
    return [sum(inv[i][j] * rhs[j] for j in range(len(rhs)))
            for i in range(len(rhs))]


def _int_kernel(M):
    """Basis of {x in Z^n : M x = 0} for an integer matrix M (list of
    rows), via column reduction with unimodular operations."""
    if not M:
        return []
    nrows, ncols = len(M), len(M[0])
    H = [list(row) for row in M]
    U = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op(j, k, f):
        # col_j -= f * col_k
        for r in range(nrows):
            H[r][j] -= f * H[r][k]
        for r in range(ncols):
            U[r][j] -= f * U[r][k]

    def col_swap(j, k):
        for r in range(nrows):
            H[r][j], H[r][k] = H[r][k], H[r][j]
        for r in range(ncols):
            U[r][j], U[r][k] = U[r][k], U[r][j]

    col = 0
    for row in range(nrows):
        if col >= ncols:
            break
        # gcd-reduce the row segment [col:] into position col
        while True:
            nz = [j for j in range(col, ncols) if H[row][j]]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(H[row][j]))
            col_swap(col, jmin)
            done = True
            for j in range(col + 1, ncols):
                if H[row][j]:
                    f = H[row][j] // H[row][col]
                    col_op(j, col, f)
                    if H[row][j]:
                        done = False
            if done:
                break
        if H[row][col] if col < ncols else 0:
            col += 1
    kernel = []
    for j in range(col, ncols):
        if all(H[r][j] == 0 for r in range(nrows)):
            kernel.append(tuple(U[r][j] for r in range(ncols)))
    return kernel


class SatakeDatum:
    """A pair (X, tau) for a root datum, eagerly validated."""

    def __init__(self, rd, X, tau):
        self.rd = rd
        self.X = tuple(sorted(X))
        self.tau = tuple(tau)
        self._validate()
        self.wX_word = rd.longest_word(self.X)
        self._theta_mat = None
        self.I_nonX = tuple(i for i in rd.I if i not in self.X)
        self.orbit_reps = tuple(sorted({min(i, self.tau[i])
                                        for i in self.I_nonX
                                        if self.tau[i] != i}))

    # -- validation ----------------------------------------------------------
    def _validate(self):
        rd, X, tau = self.rd, self.X, self.tau
        if sorted(tau) != list(rd.I):
            raise InvalidSatakeDatum("tau is not a permutation of I")
        for i in rd.I:
            if tau[tau[i]] != i:
                raise InvalidSatakeDatum("tau is not an involution")
            for j in rd.I:
                if rd.A[tau[i]][tau[j]] != rd.A[i][j]:
                    raise InvalidSatakeDatum("tau does not preserve the "
                                             "Cartan matrix")
            if rd.d[tau[i]] != rd.d[i]:
                raise InvalidSatakeDatum("tau does not preserve symmetrizers")
        for i in X:
            if tau[i] not in X:
                raise InvalidSatakeDatum("tau does not preserve X")
        if rd.affine and 0 in X and len(X) == rd.n:
            raise InvalidSatakeDatum("X must be of finite type")
        # X of finite type: positive definite symmetrized Gram
        Xl = list(X)
        for k in range(1, len(Xl) + 1):
            sub = Xl[:k]
            g = [[Fraction(rd.d[i] * rd.A[i][j]) for j in sub] for i in sub]
            if _det(g) <= 0:
                raise InvalidSatakeDatum("X is not of finite type")
        # tau restricted to X must be the opposition involution of X
        word = rd.longest_word(X)
        for j in X:
            img = rd.word_on_wt(word, rd.alpha(j))
            if img != rd.wt_neg(rd.alpha(tau[j])):
                raise InvalidSatakeDatum(
                    "tau|_X is not the opposition involution")
        # involutivity and the generalized Satake condition, on root coords
        for i in rd.I:
            c = _theta_root_raw(rd, X, tau, {i: 1})
            c2 = _theta_root_raw(rd, X, tau, c)
            if _normc(c2) != _normc({i: 1}):
                raise InvalidSatakeDatum("theta is not an involution")
            if i in X:
                if _normc(c) != _normc({i: 1}):
                    raise InvalidSatakeDatum("theta must fix alpha_j, j in X")
            else:
                # theta(alpha_i) = -alpha_i - alpha_j forces a_ij != -1
                rem = {k: -v for k, v in c.items()}
                if rem.get(i) == 1:
                    del rem[i]
                    if len(rem) == 1:
                        (j, v), = rem.items()
                        if v == 1 and j != i and rd.A[i][j] == -1:
                            raise InvalidSatakeDatum(
                                "generalized Satake condition fails")
        if rd.affine:
            delta = {i: 1 for i in rd.I}  # delta for affine sl2
            img = _theta_root_raw(rd, X, tau, delta)
            if _normc(img) != _normc({i: -1 for i in rd.I}):
                raise InvalidSatakeDatum("theta(delta) != -delta")

    # -- theta ---------------------------------------------------------------
    def theta_root(self, coords):
        """theta on the root lattice, in root coordinates."""
        return _theta_root_raw(self.rd, self.X, self.tau, coords)

    def theta_wt(self, wt):
        """theta = -w_X tau on weight functionals."""
        rd = self.rd
        t = tuple(wt[self.tau[i]] for i in rd.I)
        return rd.wt_neg(rd.word_on_wt(self.wX_word, t))

    def tau_wt(self, wt):
        return tuple(wt[self.tau[i]] for i in self.rd.I)

    def theta_coroot(self, h):
        """theta|_h = -w_X tau on coroot coordinates (tuple over I)."""
        rd = self.rd
        t = [h[self.tau[i]] for i in rd.I]
        # w_X on coroots: s_i(h) = h - alpha_i(h) h_i
        for i in reversed(self.wX_word):
            pair = sum(t[j] * rd.A[j][i] for j in rd.I)
            t[i] -= pair
        return tuple(-x for x in t)

    def minus_theta_fixed_root(self, coords):
        """Is beta (root coords) in the -1 eigenspace of theta?"""
        img = self.theta_root(coords)
        return _normc(img) == _normc({k: -v for k, v in coords.items()})

    # -- lattices ------------------------------------------------------------
    def coroot_theta_fixed_basis(self):
        """Z-basis of (Q^vee)^theta = {h in Q^vee : theta(h) = h}."""
        n = self.rd.n
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                e = [0] * n
                e[c] = 1
                img = self.theta_coroot(tuple(e))
                row.append(img[r] - (1 if r == c else 0))
            rows.append(row)
        return _int_kernel(rows)

    def zeta(self, wt, h):
        """zeta_wt(h) = (1/2) wt(h + theta(h)) for h coroot coords."""
        th = self.theta_coroot(tuple(h))
        return Fraction(1, 2) * sum(
            w * (a + b) for w, a, b in zip(wt, h, th))

    def qsp_weight_class(self, wt):
        basis = self.coroot_theta_fixed_basis()
        return QspWeightClass(self, wt,
                              tuple(self.zeta(wt, h) for h in basis))

    def in_minus_theta_wt(self, wt):
        return self.theta_wt(wt) == self.rd.wt_neg(wt)

    # -- derived quantities --------------------------------------------------
    def alpha_pair_two_rho_vee_X(self, i):
        """alpha_i(2 rho^vee_X)."""
        out = Fraction(0)
        for beta in self.rd.positive_roots(self.X):
            bv = self.rd.coroot_of(beta)
            out += sum(v * self.rd.A[j][i] for j, v in bv.items())
        if out.denominator != 1:
            raise CartanError("non-integral pairing with 2 rho^vee_X")
        return int(out)

    def m_theta_exponent(self, wt):
        """Exponent of q on the wt weight space for the Cartan correction
        of the parabolic braid operator: (theta(wt), wt)/2 + (wt, rho_X)."""
        rd = self.rd
        e = rd.pairing(self.theta_wt(wt), wt) / 2
        e += rd.pair_with_root_combo(wt, rd.rho_coords(self.X))
        return e

    def sigma_allowed(self, i):
        return self.tau[i] == i and i not in self.X and \
            self.minus_theta_fixed_root({i: 1})

    def gamma_constraints(self):
        """Pairs (i, tau(i)) whose gamma values must agree."""
        out = []
        for i in self.I_nonX:
            ai = self.rd.alpha(i)
            if self.rd.pairing(ai, self.theta_wt(ai)) == 0 \
                    and self.tau[i] != i:
                out.append((min(i, self.tau[i]), max(i, self.tau[i])))
        return sorted(set(out))


def _theta_root_raw(rd, X, tau, coords):
    t = {tau[i]: c for i, c in coords.items()}
    word = rd.longest_word(X)
    # apply w_X then negate
    for i in reversed(word):
        t = rd.reflect_root_coords(i, t)
    return {k: -v for k, v in t.items() if v}


def _normc(c):
    return tuple(sorted((k, v) for k, v in c.items() if v))


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            out = -out
        out *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return out


class QspWeightClass:
    """Class of a weight in P / P^{-theta}, identified by its zeta values
    on a fixed basis of (Q^vee)^theta."""

    __slots__ = ("sd", "rep", "zetas")

    def __init__(self, sd, rep, zetas):
        self.sd = sd
        self.rep = rep
        self.zetas = zetas

    def __eq__(self, other):
        return isinstance(other, QspWeightClass) and \
            self.zetas == other.zetas

    def __hash__(self):
        return hash(self.zetas)

    def __repr__(self):
        return f"QspWeightClass{self.zetas}"

    def shifted(self, coords):
        """Class of rep + sum coords_i alpha_i."""
        wt = self.sd.rd.root_shift(self.rep, coords)
        return self.sd.qsp_weight_class(wt)

"""Cylindrical braid groupoid acting on M x V_{s_1} x ... x V_{s_n}.

Objects are sign strings: each tensor slot carries a sign, + for the
plain module and - for its twisted partner.  Morphism words are built
from the crossing generators Ct(ss, i) -- acting on adjacent slots
(i, i+1) by a flipped R-matrix, with ss naming the source signs -- and
the boundary generator Cb acting on the base leg and slot 1 by a tensor
K-matrix.  Only the sign patterns ++, --, -+ admit a crossing generator;
+- crossings arise as inverses of -+.

evaluate_word multiplies the operator images while tracking signs and
slot contents (crossings swap slots, so in spectral scenarios the
evaluation parameters travel with the slots).  The verification suite
checks the mixed braid relations on three slots, the two-boundary
reflection equation on two slots, and the induced boundary identity
that rewrites the boundary generator of a lengthened base against a
directly computed tensor K-matrix.
"""

import re

from .linalg import Mat
from .rmatrix import flip_mat, embed_legs


class GroupoidError(Exception):
    pass


class NotComposable(GroupoidError):
    pass


CT_SOURCES = {"++": ("+", "+"), "--": ("-", "-"), "-+": ("-", "+")}


class GroupoidRep:
    """Operator images of the groupoid generators on M x (slots).

    slots: list of (plus_mod, minus_mod) pairs sharing one dimension.
    r_image(A, B): matrix of the flipped R-matrix A x B -> B x A.
    k_image(slot): matrix of the tensor K-matrix on M x plus_mod,
    landing in M x minus_mod.
    """

    def __init__(self, M, slots, r_image, k_image, dom):
        self.M = M
        self.slots = list(slots)
        self.dom = dom
        self._r = r_image
        self._k = k_image
        self._rcache = {}
        self._kcache = {}

    def n(self):
        return len(self.slots)

    def slot_dims(self):
        return [p.dim for p, _ in self.slots]

    def total_dim(self, state):
        d = self.M.dim
        for _, mod in state:
            d *= mod.dim
        return d

    def initial_state(self, signs=None):
        signs = signs or "+" * len(self.slots)
        if len(signs) != len(self.slots):
            raise GroupoidError("sign string length mismatch")
        out = []
        for s, (p, m) in zip(signs, self.slots):
            out.append((s, p if s == "+" else m, (p, m)))
        return [(s, mod) for s, mod, _ in out], \
            [pair for _, _, pair in out]

    def r_mat(self, A, B):
        key = (id(A), id(B))
        if key not in self._rcache:
            self._rcache[key] = self._r(A, B)
        return self._rcache[key]

    def k_mat(self, pair):
        key = id(pair[0])
        if key not in self._kcache:
            self._kcache[key] = self._k(pair)
        return self._kcache[key]


def parse_word(text):
    """Word syntax: generators separated by ';', applied left to right.
    'Cb' or 'Ct(-+,1)' with 1-based slot positions; a '^-1' suffix
    inverts the generator."""
    gens = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        inv = tok.endswith("^-1")
        if inv:
            tok = tok[:-3].strip()
        if tok == "Cb":
            gens.append(("Cb", None, None, inv))
            continue
        m = re.fullmatch(r"Ct\(\s*([+-]{2})\s*,\s*(\d+)\s*\)", tok)
        if not m:
            raise GroupoidError(f"cannot parse generator {tok!r}")
        st, pos = m.group(1), int(m.group(2))
        if st not in CT_SOURCES:
            raise GroupoidError(f"no crossing generator with signs {st}")
        gens.append(("Ct", st, pos, inv))
    return gens


def evaluate_word(rep, word, signs=None):
    """Ordered product of generator images; word entries are
    (kind, signs, position, inverted) tuples as built by parse_word, or
    the same tuples given directly.  Returns (matrix, final sign string)."""
    if isinstance(word, str):
        word = parse_word(word)
    state, pairs = rep.initial_state(signs)
    dims = [mod.dim for _, mod in state]
    total = rep.M.dim
    for d in dims:
        total *= d
    acc = Mat.identity(total, rep.dom)
    for kind, st, pos, inv in word:
        if kind == "Cb":
            s0, mod0 = state[0]
            want = "-" if inv else "+"
            if s0 != want:
                raise NotComposable(
                    f"boundary generator needs sign {want} in slot 1, "
                    f"found {s0}")
            K = rep.k_mat(pairs[0])
            if inv:
                K = K.inverse()
            tail = 1
            for _, mod in state[1:]:
                tail *= mod.dim
            op = K.tensor(Mat.identity(tail, rep.dom)) if tail > 1 else K
            p, m = pairs[0]
            state[0] = ("-", m) if not inv else ("+", p)
        else:
            i = pos - 1
            if i < 0 or i + 1 >= len(state):
                raise NotComposable(f"no adjacent slots at position {pos}")
            src = CT_SOURCES[st]
            here = (state[i][0], state[i + 1][0])
            want = (src[1], src[0]) if inv else src
            if here != want:
                raise NotComposable(
                    f"crossing {st} at position {pos} needs signs "
                    f"{''.join(want)}, found {''.join(here)}")
            A, B = state[i][1], state[i + 1][1]
            if inv:
                R = rep.r_mat(B, A).inverse()
            else:
                R = rep.r_mat(A, B)
            op = _embed_adjacent(R, rep.M.dim, [d for _, d in
                                                _dims(state)], i, rep.dom)
            state[i], state[i + 1] = state[i + 1], state[i]
            pairs[i], pairs[i + 1] = pairs[i + 1], pairs[i]
        acc = op * acc
    return acc, "".join(s for s, _ in state)


def _dims(state):
    return [(s, mod.dim) for s, mod in state]


def _embed_adjacent(R, dM, slot_dims, i, dom):
    """Embed an operator on slots (i, i+1) into M x (all slots)."""
    dims = [dM] + slot_dims
    pre = 1
    for d in dims[:i + 1]:
        pre *= d
    post = 1
    for d in dims[i + 3:]:
        post *= d
    op = Mat.identity(pre, dom).tensor(R)
    if post > 1:
        op = op.tensor(Mat.identity(post, dom))
    return op


def ct(st, pos, inv=False):
    return ("Ct", st, pos, inv)


def cb(inv=False):
    return ("Cb", None, None, inv)


# ---------------------------------------------------------------------------
# Relation suite

MIXED_BRAID_SIGNS = [("+", "+", "+"), ("-", "-", "-"),
                     ("-", "+", "+"), ("-", "-", "+")]


def check_mixed_braid(rep):
    """The braid-type relations on three slots, for every sign triple
    whose three crossings all exist.  Returns [(signs, ok)]."""
    if rep.n() < 3:
        raise GroupoidError("three slots required")
    out = []
    for sg, tu, ze in MIXED_BRAID_SIGNS:
        signs = sg + tu + ze + "+" * (rep.n() - 3)
        lhs_w = [ct(sg + tu, 1), ct(sg + ze, 2), ct(tu + ze, 1)]
        rhs_w = [ct(tu + ze, 2), ct(sg + ze, 1), ct(sg + tu, 2)]
        L, sl = evaluate_word(rep, lhs_w, signs)
        R, sr = evaluate_word(rep, rhs_w, signs)
        out.append((sg + tu + ze, sl == sr and L == R))
    return out


def check_cherednik(rep):
    """The two-boundary reflection equation on M x slot1 x slot2."""
    if rep.n() < 2:
        raise GroupoidError("two slots required")
    signs = "++" + "+" * (rep.n() - 2)
    L, sl = evaluate_word(rep, [cb(), ct("-+", 1), cb(), ct("--", 1)], signs)
    R, sr = evaluate_word(rep, [ct("++", 1), cb(), ct("-+", 1), cb()], signs)
    return sl == sr and L == R


def induced_boundary_word(sign1):
    """For a base lengthened by one slot of the given sign, the word
    expressing the boundary operator on the new last slot."""
    first = ct("++", 1) if sign1 == "+" else ct("-+", 1)
    last = ct("-+", 1) if sign1 == "+" else ct("--", 1)
    return [first, cb(), last]


def check_induced_boundary(rep, direct, sign1="+"):
    """Compare the word Ct'' Cb Ct' on M x slot1 x slot2 against a
    directly computed tensor K-matrix `direct` on (M x slot1) x slot2."""
    if rep.n() < 2:
        raise GroupoidError("two slots required")
    signs = sign1 + "+" + "+" * (rep.n() - 2)
    W, sfin = evaluate_word(rep, induced_boundary_word(sign1), signs)
    tail = 1
    for p, _ in rep.slots[2:]:
        tail *= p.dim
    if tail > 1:
        direct = direct.tensor(Mat.identity(tail, rep.dom))
    return sfin == signs[0] + "-" + signs[2:] and W == direct


def verify_groupoid_relations(rep, direct_boundary=None):
    """Full relation report: mixed braid relations, the reflection
    equation, word inverses, and (when a direct operator is supplied)
    the induced boundary identity."""
    out = []
    for signs, ok in check_mixed_braid(rep):
        out.append((f"mixed-braid-{signs}", ok))
    out.append(("cherednik-re", check_cherednik(rep)))
    total = rep.total_dim(rep.initial_state()[0])
    E, se = evaluate_word(rep, [], None)
    out.append(("empty-word", E == Mat.identity(total, rep.dom)))
    W, _ = evaluate_word(rep, [cb(), ct("-+", 1), ct("-+", 1, inv=True),
                               cb(inv=True)], None)
    out.append(("word-inverse", W == Mat.identity(total, rep.dom)))
    if direct_boundary is not None:
        out.append(("induced-boundary",
                    check_induced_boundary(rep, direct_boundary)))
    return out


# ---------------------------------------------------------------------------
# Scenario builders

def finite_rep(dM, dV, n=3):
    """Groupoid representation for a finite-type pair: slots are copies
    of the module of dV with its twisted partner, crossings come from the
    quasi-R solve, and the boundary from the tensor K-matrix."""
    from . import rmatrix as rm
    from .kmatrix import tensor_K
    V = dV["qsp"].mod
    psiV = dV["psiV"]
    dom = V.domain
    M = dM["qsp"].mod if isinstance(dM, dict) else dM

    def r_image(A, B):
        P = flip_mat(A.dim, B.dim, dom)
        return P * rm.R_matrix(A, B)

    def k_image(pair):
        return tensor_K(dM, dV)

    return GroupoidRep(M, [(V, psiV)] * n, r_image, k_image, dom)


def spectral_rep(sd, gamma, sigma, M, V, params):
    """Groupoid representation for the affine rank-one spectral scenario:
    slot k carries the module shifted by params[k], its twisted partner
    is the involutive twist (with the inverse shift built in), and the
    boundary operator is the rational tensor K-matrix at the slot's
    parameter."""
    from .rmatrix import trig_R
    from .spectral import grading_shift, omega_tau_twist, trig_tensor_K
    dom = V.domain
    slots = []
    kmap = {}
    for k, z in enumerate(params):
        plus = grading_shift(V, sd, z, label=f"{V.label}@{k}")
        minus = omega_tau_twist(plus, sd.tau)
        slots.append((plus, minus))
        kmap[id(plus)] = z

    def r_image(A, B):
        P = flip_mat(A.dim, B.dim, dom)
        return P * trig_R(A, B)

    def k_image(pair):
        z = kmap[id(pair[0])]
        return trig_tensor_K(sd, gamma, sigma, M, V, zval=z)["TK"]

    return GroupoidRep(M, slots, r_image, k_image, dom)

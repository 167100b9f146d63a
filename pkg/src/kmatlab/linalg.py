"""Sparse exact linear algebra over an arbitrary coefficient field.

Matrices are stored row-sparse: {row: {col: elem}} with no stored zeros.
Everything works for any element type supporting field arithmetic and
truthiness (zero is falsy), so the same code runs over Q(q^(1/D)), over
rational functions in a spectral parameter, and over nested two-parameter
fields.
"""


class LinAlgError(Exception):
    pass


class NoSolution(LinAlgError):
    pass


class NonUniqueSolution(LinAlgError):
    pass


def _elem_size(v):
    sz = getattr(v, "size", None)
    return sz() if callable(sz) else 1


class Mat:
    __slots__ = ("nrows", "ncols", "field", "rows")

    def __init__(self, nrows, ncols, field, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.rows = rows if rows is not None else {}

    # -- construction -------------------------------------------------------
    @staticmethod
    def identity(n, field):
        return Mat(n, n, field, {i: {i: field.one} for i in range(n)})

    @staticmethod
    def zero(nrows, ncols, field):
        return Mat(nrows, ncols, field)

    @staticmethod
    def from_entries(nrows, ncols, field, entries):
        """entries: iterable of (i, j, value)."""
        m = Mat(nrows, ncols, field)
        for i, j, v in entries:
            if v:
                m.rows.setdefault(i, {})[j] = v
        return m

    @staticmethod
    def diagonal(values, field):
        n = len(values)
        return Mat(n, n, field,
                   {i: {i: v} for i, v in enumerate(values) if v})

    def copy(self):
        return Mat(self.nrows, self.ncols, self.field,
                   {i: dict(r) for i, r in self.rows.items()})

    # -- access -------------------------------------------------------------
    def get(self, i, j):
        return self.rows.get(i, {}).get(j, self.field.zero)

    def set(self, i, j, v):
        if v:
            self.rows.setdefault(i, {})[j] = v
        else:
            r = self.rows.get(i)
            if r is not None:
                r.pop(j, None)
                if not r:
                    del self.rows[i]

    def entries(self):
        for i, r in self.rows.items():
            for j, v in r.items():
                yield i, j, v

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        self._shape_chk(other)
        out = self.copy()
        for i, j, v in other.entries():
            out.set(i, j, out.get(i, j) + v)
        return out

    def __sub__(self, other):
        self._shape_chk(other)
        out = self.copy()
        for i, j, v in other.entries():
            out.set(i, j, out.get(i, j) - v)
        return out

    def __neg__(self):
        return Mat(self.nrows, self.ncols, self.field,
                   {i: {j: -v for j, v in r.items()}
                    for i, r in self.rows.items()})

    def scale(self, c):
        if not c:
            return Mat.zero(self.nrows, self.ncols, self.field)
        return Mat(self.nrows, self.ncols, self.field,
                   {i: {j: c * v for j, v in r.items()}
                    for i, r in self.rows.items()})

    def __mul__(self, other):
        if not isinstance(other, Mat):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise LinAlgError("shape mismatch in matrix product")
        out = Mat(self.nrows, other.ncols, self.field)
        for i, r in self.rows.items():
            acc = {}
            for k, v in r.items():
                br = other.rows.get(k)
                if not br:
                    continue
                for j, w in br.items():
                    t = v * w
                    cur = acc.get(j)
                    cur = t if cur is None else cur + t
                    if cur:
                        acc[j] = cur
                    else:
                        acc.pop(j, None)
            if acc:
                out.rows[i] = acc
        return out

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return not (self - other).rows

    def is_zero(self):
        return not self.rows

    def _shape_chk(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise LinAlgError("shape mismatch")

    def transpose(self):
        out = Mat(self.ncols, self.nrows, self.field)
        for i, j, v in self.entries():
            out.rows.setdefault(j, {})[i] = v
        return out

    def trace(self):
        out = self.field.zero
        for i in range(min(self.nrows, self.ncols)):
            out = out + self.get(i, i)
        return out

    def apply(self, fn, field=None):
        """Entrywise map; drops entries that become zero."""
        out = Mat(self.nrows, self.ncols, field or self.field)
        for i, j, v in self.entries():
            out.set(i, j, fn(v))
        return out

    def tensor(self, other):
        """Kronecker product (self acts on the first factor)."""
        out = Mat(self.nrows * other.nrows, self.ncols * other.ncols,
                  self.field)
        for i, j, v in self.entries():
            for k, l, w in other.entries():
                out.rows.setdefault(i * other.nrows + k, {})[
                    j * other.ncols + l] = v * w
        return out

    # -- elimination-based operations ---------------------------------------
    def inverse(self):
        if self.nrows != self.ncols:
            raise LinAlgError("inverse of a non-square matrix")
        n = self.nrows
        f = self.field
        a = [[self.get(i, j) for j in range(n)] for i in range(n)]
        b = [[f.one if i == j else f.zero for j in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = None
            best = None
            for r in range(col, n):
                v = a[r][col]
                if v:
                    s = _elem_size(v)
                    if best is None or s < best:
                        best, piv = s, r
            if piv is None:
                raise LinAlgError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            inv = f.one / a[col][col]
            a[col] = [v * inv if v else v for v in a[col]]
            b[col] = [v * inv if v else v for v in b[col]]
            for r in range(n):
                if r == col:
                    continue
                c = a[r][col]
                if not c:
                    continue
                a[r] = [x - c * y if y else x for x, y in zip(a[r], a[col])]
                b[r] = [x - c * y if y else x for x, y in zip(b[r], b[col])]
        return Mat.from_entries(n, n, f,
                                ((i, j, b[i][j]) for i in range(n)
                                 for j in range(n)))

    def rank(self):
        rows = [dict(r) for r in self.rows.values()]
        return len(_eliminate(rows, self.field))

    def column(self, j):
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def flatten(self):
        """Row-major vector view as {index: value}."""
        return {i * self.ncols + j: v for i, j, v in self.entries()}


# ---------------------------------------------------------------------------
# Sparse row elimination utilities.  A "row" is a dict {col: elem}.

def det(M):
    """Determinant by dynamic programming over column subsets (avoids
    field divisions, which matters over rational-function domains)."""
    if M.nrows != M.ncols:
        raise LinAlgError("determinant of a non-square matrix")
    n = M.nrows
    f = M.field
    state = {(1 << n) - 1: f.one}
    for r in range(n):
        nxt = {}
        row = M.rows.get(r, {})
        for mask, val in state.items():
            parity = 0
            for c in range(n):
                if not (mask >> c) & 1:
                    continue
                v = row.get(c)
                if v:
                    term = val * v
                    if parity & 1:
                        term = -term
                    key = mask & ~(1 << c)
                    cur = nxt.get(key)
                    nxt[key] = term if cur is None else cur + term
                parity += 1
        state = {k: v for k, v in nxt.items() if v}
        if not state:
            return f.zero
    return state.get(0, f.zero)


def _eliminate(rows, field):
    """Forward-eliminate rows in place; returns list of (pivot_col, row)
    in elimination order, rows normalized to pivot 1."""
    pivots = []
    work = [r for r in rows if r]
    while work:
        # pick the row whose best entry is simplest
        bi = bv = bc = None
        for idx, r in enumerate(work):
            for c, v in r.items():
                s = _elem_size(v) * (1 + len(r))
                if bv is None or s < bv:
                    bi, bv, bc = idx, s, c
        row = work.pop(bi)
        piv = row[bc]
        inv = field.one / piv
        row = {c: v * inv for c, v in row.items()}
        pivots.append((bc, row))
        nxt = []
        for r in work:
            v = r.get(bc)
            if v:
                r = _row_sub(r, row, v)
            if r:
                nxt.append(r)
        work = nxt
    return pivots


def _row_sub(r, row, c):
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


def nullspace(rows, ncols, field):
    """Basis of the right kernel of the sparse system given by rows
    (each a dict {col: elem}); returns list of {col: elem} vectors."""
    pivots = _eliminate([dict(r) for r in rows], field)
    # back substitution: reduce each pivot row against later pivots
    reduced = []
    for i in range(len(pivots) - 1, -1, -1):
        c, row = pivots[i]
        for pc, prow in reduced:
            v = row.get(pc)
            if v:
                row = _row_sub(row, prow, v)
        reduced.append((c, row))
    reduced.reverse()
    pivot_cols = {c for c, _ in reduced}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = {fc: field.one}
        for c, row in reduced:
            v = row.get(fc)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def solve_membership(vectors, target, field):
    """Exact solve of sum_k x_k vectors[k] = target, with vectors/target
    sparse dicts {index: elem}.  Returns coefficient list or None."""
    # columns: one per vector, plus the target as the last column; kernel
    # vectors with a -1 in the last slot give the decomposition.
    rows = {}
    for k, vec in enumerate(vectors):
        for idx, v in vec.items():
            rows.setdefault(idx, {})[k] = v
    nv = len(vectors)
    for idx, v in target.items():
        rows.setdefault(idx, {})[nv] = -v
    basis = nullspace(list(rows.values()), nv + 1, field)
    for vec in basis:
        c = vec.get(nv)
        if c:
            inv = field.one / c
            return [vec.get(k, field.zero) * inv for k in range(nv)]
    return None


def span_contains(vectors, target, field):
    return solve_membership(vectors, target, field) is not None


def solve_linear(rows, rhs, ncols, field):
    """Solve A x = b where rows are sparse dicts and rhs a list of
    elements.  Raises NoSolution / NonUniqueSolution as appropriate."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = -b
        aug.append(row)
    basis = nullspace(aug, ncols + 1, field)
    sol = None
    hom = 0
    for vec in basis:
        c = vec.get(ncols)
        if c:
            inv = field.one / c
            sol = {k: v * inv for k, v in vec.items() if k != ncols}
        else:
            hom += 1
    if sol is None:
        raise NoSolution("inconsistent linear system")
    if hom:
        raise NonUniqueSolution("underdetermined linear system")
    return sol


def matrix_algebra_span(generators, field, with_identity=True):
    """Linear basis (as flattened sparse vectors with attached matrices) of
    the unital algebra generated by the given square matrices."""
    n = generators[0].nrows
    basis_rows = []   # list of (pivot_col, reduced_row)
    basis_mats = []

    def add(m):
        row = m.flatten()
        for c, brow in basis_rows:
            v = row.get(c)
            if v:
                row = _row_sub(row, brow, v)
        if not row:
            return False
        # normalize
        c = min(row, key=lambda j: _elem_size(row[j]))
        inv = field.one / row[c]
        row = {j: v * inv for j, v in row.items()}
        basis_rows.append((c, row))
        basis_mats.append(m)
        return True

    frontier = []
    if with_identity:
        ident = Mat.identity(n, field)
        add(ident)
        frontier.append(ident)
    for g in generators:
        if add(g):
            frontier.append(g)
    while frontier:
        new = []
        for m in frontier:
            for g in generators:
                p = m * g
                if add(p):
                    new.append(p)
        frontier = new
    return basis_mats

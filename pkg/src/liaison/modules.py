"""Finitely generated graded R-modules as subquotients of free modules.

A module is (im gens + im rels)/(im rels) inside R^rank with degree shifts.
Generators are stored exactly as passed (after homogeneity validation), so
matrix indices of maps stay stable; ``minimize`` produces the pruned copy
together with the comparison maps.  All values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import groebner
from .errors import (
    IllDefinedMap,
    InhomogeneousInput,
    InternalConsistencyError,
    RingMismatch,
)
from .groebner import vec_degree, vec_is_zero
from .ring import parse_poly, render_poly


def zero_vec(ctx, rank):
    return (ctx.zero(),) * rank


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_combine(columns, coeffs, ctx, rank):
    """Sum of coeffs[j] * columns[j]."""
    acc = list(zero_vec(ctx, rank))
    for u, col in zip(coeffs, columns):
        if not u:
            continue
        for pos, f in enumerate(col):
            if f:
                acc[pos] = acc[pos] + u * f
    return tuple(acc)


class GradedModule:
    __slots__ = ("ctx", "rank", "shifts", "gens", "rels", "_cache", "provenance")

    def __init__(self, ctx, rank, shifts, gens, rels):
        self.ctx = ctx
        self.rank = rank
        self.shifts = tuple(shifts)
        self.gens = tuple(tuple(col) for col in gens)
        self.rels = tuple(tuple(col) for col in rels)
        self._cache = {}
        self.provenance = None

    # -- basic structure ---------------------------------------------------

    def gen_degrees(self):
        degs = self._cache.get("gen_degrees")
        if degs is None:
            out = []
            for col in self.gens:
                d = vec_degree(col, self.shifts)
                out.append(0 if d is None else d)
            degs = tuple(out)
            self._cache["gen_degrees"] = degs
        return degs

    def rels_gb(self):
        gb = self._cache.get("rels_gb")
        if gb is None:
            gb = groebner.buchberger(self.rels, self.ctx, self.rank, self.shifts)
            self._cache["rels_gb"] = gb
        return gb

    def full_gb(self):
        gb = self._cache.get("full_gb")
        if gb is None:
            gb = groebner.buchberger(
                list(self.gens) + list(self.rels), self.ctx, self.rank, self.shifts
            )
            self._cache["full_gb"] = gb
        return gb

    def is_zero(self):
        flag = self._cache.get("is_zero")
        if flag is None:
            gb = self.rels_gb()
            flag = all(gb.contains(col) for col in self.gens)
            self._cache["is_zero"] = flag
        return flag

    def coords_to_ambient(self, coords):
        return vec_combine(self.gens, coords, self.ctx, self.rank)

    def contains_ambient(self, vec):
        return self.full_gb().contains(vec)

    def element_is_zero(self, coords):
        return self.rels_gb().contains(self.coords_to_ambient(coords))

    def express_in_gens(self, vec):
        """Coordinates of an ambient vector over the generators, mod rels."""
        sol, bad = groebner.lift_through(
            list(self.gens), [vec], self.ctx, self.rank, self.shifts, extra=self.rels
        )
        if sol is None:
            raise ValueError("vector does not lie in the module")
        return sol[0]

    def column_relations(self):
        """Minimal generators of {u : gens*u = 0 in the module} over R."""
        rels = self._cache.get("colrels")
        if rels is None:
            if not self.gens:
                rels = []
            else:
                rels = groebner.syzygies(
                    list(self.gens),
                    self.ctx,
                    self.rank,
                    self.shifts,
                    extra=self.rels,
                )
            self._cache["colrels"] = tuple(rels)
            rels = self._cache["colrels"]
        return list(rels)

    # -- numerical data ------------------------------------------------------

    def hilbert(self):
        data = self._cache.get("hilbert")
        if data is None:
            bot = groebner.leadterm_hilbert(self.rels_gb(), self.rank, self.shifts)
            top = groebner.leadterm_hilbert(self.full_gb(), self.rank, self.shifts)
            num = dict(bot.numerator)
            for d, c in top.numerator.items():
                num[d] = num.get(d, 0) - c
                if not num[d]:
                    del num[d]
            data = groebner.HilbertData(self.ctx, num)
            self._cache["hilbert"] = data
        return data

    def hf(self, d):
        return self.hilbert().hf(d)

    def hf_window(self, lo, hi):
        return self.hilbert().hf_window(lo, hi)

    def dim(self):
        return self.hilbert().dim

    def __repr__(self):
        return (
            f"GradedModule(rank={self.rank}, gens={len(self.gens)}, "
            f"rels={len(self.rels)} over {self.ctx!r})"
        )

    def to_json(self):
        return {
            "ambient_rank": self.rank,
            "shifts": list(self.shifts),
            "gens": [[render_poly(f) for f in col] for col in self.gens],
            "rels": [[render_poly(f) for f in col] for col in self.rels],
        }


def module_from_json(ctx, blob):
    rank = blob["ambient_rank"]
    shifts = blob["shifts"]
    gens = [tuple(parse_poly(ctx, s) for s in col) for col in blob["gens"]]
    rels = [tuple(parse_poly(ctx, s) for s in col) for col in blob["rels"]]
    return subquotient(ctx, gens, rels, shifts)


# ---------------------------------------------------------------------------
# constructors


def _validated_columns(ctx, cols, rank, shifts, drop_zero=False):
    out = []
    for col in cols:
        col = tuple(ctx.lift_poly(f) for f in col)
        if len(col) != rank:
            raise ValueError("column length does not match ambient rank")
        vec_degree(col, shifts)  # raises InhomogeneousInput on bad input
        if drop_zero and vec_is_zero(col):
            continue
        out.append(col)
    return out


def subquotient(ctx, gens, rels, shifts=None, rank=None):
    """The module (<gens> + <rels>)/<rels> in R^rank, canonicalized.

    Relations are replaced by their reduced Groebner basis; identically zero
    generator columns are dropped.
    """
    if not ctx.is_graded():
        raise InhomogeneousInput("module layer needs a graded ring context")
    if rank is None:
        rank = len(shifts) if shifts is not None else (len(gens[0]) if gens else 1)
    shifts = tuple(shifts) if shifts is not None else (0,) * rank
    gens = _validated_columns(ctx, gens, rank, shifts, drop_zero=True)
    rels = _validated_columns(ctx, rels, rank, shifts, drop_zero=True)
    gb = groebner.buchberger(rels, ctx, rank, shifts)
    mod = GradedModule(ctx, rank, shifts, gens, gb.vectors())
    mod._cache["rels_gb"] = gb
    return mod


def free_module(ctx, rank, shifts=None):
    shifts = tuple(shifts) if shifts is not None else (0,) * rank
    gens = []
    for i in range(rank):
        col = [ctx.zero()] * rank
        col[i] = ctx.one()
        gens.append(tuple(col))
    return subquotient(ctx, gens, [], shifts, rank)


def cyclic_module(ctx, ideal_gens, twist_by=0):
    """R/I as a rank-1 subquotient."""
    gens = [(ctx.one(),)]
    rels = [(ctx.lift_poly(f),) for f in ideal_gens if f]
    return subquotient(ctx, gens, rels, (-twist_by,), 1)


def twist(M, a):
    """M(a): degrees shift down by a, HF_{M(a)}(d) = HF_M(d + a)."""
    mod = GradedModule(
        M.ctx, M.rank, tuple(s - a for s in M.shifts), M.gens, M.rels
    )
    return mod


# ---------------------------------------------------------------------------
# maps


class ModuleMap:
    """Graded homomorphism given by images of source generators.

    ``mat[j]`` holds the coordinates of f(source gen j) over target gens.
    """

    __slots__ = ("source", "target", "mat", "degree")

    def __init__(self, source, target, mat, degree=0, check=True):
        if source.ctx is not target.ctx:
            if not source.ctx.same_polynomial_ring(target.ctx):
                raise RingMismatch("map between modules over different rings")
        self.source = source
        self.target = target
        self.mat = tuple(tuple(row) for row in mat)
        self.degree = degree
        if len(self.mat) != len(source.gens):
            raise IllDefinedMap("matrix width does not match source generators")
        for col in self.mat:
            if len(col) != len(target.gens):
                raise IllDefinedMap("matrix height does not match target generators")
        if check:
            self._check_well_defined()

    def _check_well_defined(self):
        src_deg = self.source.gen_degrees()
        tgt_deg = self.target.gen_degrees()
        for j, col in enumerate(self.mat):
            for i, entry in enumerate(col):
                if not entry:
                    continue
                if not entry.is_homogeneous():
                    raise IllDefinedMap("map entry is inhomogeneous")
                if entry.degree() != src_deg[j] + self.degree - tgt_deg[i]:
                    raise IllDefinedMap(
                        f"entry ({i},{j}) has degree {entry.degree()}, expected "
                        f"{src_deg[j] + self.degree - tgt_deg[i]}"
                    )
        for u in self.source.column_relations():
            w = self.apply_coords(u)
            if not self.target.element_is_zero(w):
                raise IllDefinedMap("source relation does not map to zero")

    def apply_coords(self, coords):
        """Image of an element given in source generator coordinates."""
        out = [self.target.ctx.zero()] * len(self.target.gens)
        for j, u in enumerate(coords):
            if not u:
                continue
            for i, entry in enumerate(self.mat[j]):
                if entry:
                    out[i] = out[i] + u * entry
        return tuple(out)

    def image_columns_ambient(self):
        return [self.target.coords_to_ambient(col) for col in self.mat]

    def compose(self, other):
        """self o other (apply other first)."""
        if other.target is not self.source:
            if other.target.gens != self.source.gens:
                raise IllDefinedMap("maps are not composable")
        mat = [self.apply_coords(col) for col in other.mat]
        return ModuleMap(
            other.source, self.target, mat, self.degree + other.degree, check=False
        )

    def is_injective(self):
        K, _ = kernel(self)
        return K.is_zero()

    def is_surjective(self):
        C, _ = cokernel(self)
        return C.is_zero()


def identity_map(M):
    n = len(M.gens)
    mat = []
    for j in range(n):
        col = [M.ctx.zero()] * n
        col[j] = M.ctx.one()
        mat.append(col)
    return ModuleMap(M, M, mat, check=False)


def zero_map(M, N):
    return ModuleMap(M, N, [[N.ctx.zero()] * len(N.gens) for _ in M.gens], check=False)


def kernel(f):
    """Kernel of f, with its inclusion into the source."""
    src, tgt = f.source, f.target
    ctx = src.ctx
    if not tgt.gens or not src.gens:
        K = GradedModule(ctx, src.rank, src.shifts, src.gens, src.rels)
        return K, ModuleMap(K, src, identity_map(src).mat, check=False)
    images = f.image_columns_ambient()
    syz = groebner.syzygies(images, ctx, tgt.rank, tgt.shifts, extra=tgt.rels)
    # syzygy coordinates are over the source generators; a coordinate vector
    # whose ambient image vanishes identically is the zero element of the
    # source (a column relation), so it contributes nothing to the kernel
    kept, ker_cols = [], []
    for u in syz:
        amb = src.coords_to_ambient(u)
        if vec_is_zero(amb):
            continue
        kept.append(u)
        ker_cols.append(amb)
    K = GradedModule(ctx, src.rank, src.shifts, ker_cols, src.rels)
    K._cache["rels_gb"] = src.rels_gb()
    incl = ModuleMap(K, src, kept, check=False)
    return K, incl


def cokernel(f):
    """Cokernel of f, with the projection from the target."""
    tgt = f.target
    rels = list(tgt.rels) + f.image_columns_ambient()
    gb = groebner.buchberger(rels, tgt.ctx, tgt.rank, tgt.shifts)
    C = GradedModule(tgt.ctx, tgt.rank, tgt.shifts, tgt.gens, gb.vectors())
    C._cache["rels_gb"] = gb
    proj = ModuleMap(tgt, C, identity_map(tgt).mat, check=False)
    return C, proj


def image(f):
    """Image of f as a submodule of the target, with its inclusion."""
    tgt = f.target
    cols = f.image_columns_ambient()
    I = GradedModule(tgt.ctx, tgt.rank, tgt.shifts, cols, tgt.rels)
    incl = ModuleMap(I, tgt, list(f.mat), check=False)
    return I, incl


def is_iso(f):
    """True iff the given degree-0 map has zero kernel and zero cokernel."""
    K, _ = kernel(f)
    if not K.is_zero():
        return False
    C, _ = cokernel(f)
    return C.is_zero()


# ---------------------------------------------------------------------------
# direct sums, tensor, Hom


def direct_sum(*mods):
    """Block sum, with injections and projections."""
    ctx = mods[0].ctx
    rank = sum(M.rank for M in mods)
    shifts = tuple(s for M in mods for s in M.shifts)

    def pad(col, before, after):
        return (ctx.zero(),) * before + tuple(col) + (ctx.zero(),) * after

    gens, rels = [], []
    offsets = []
    pos = 0
    gen_offsets = []
    gpos = 0
    for M in mods:
        offsets.append(pos)
        gen_offsets.append(gpos)
        for col in M.gens:
            gens.append(pad(col, pos, rank - pos - M.rank))
        for col in M.rels:
            rels.append(pad(col, pos, rank - pos - M.rank))
        pos += M.rank
        gpos += len(M.gens)
    total_gens = gpos
    S = GradedModule(ctx, rank, shifts, gens, rels)
    injections, projections = [], []
    for k, M in enumerate(mods):
        inj_mat = []
        for j in range(len(M.gens)):
            col = [ctx.zero()] * total_gens
            col[gen_offsets[k] + j] = ctx.one()
            inj_mat.append(col)
        injections.append(ModuleMap(M, S, inj_mat, check=False))
        proj_mat = []
        for g in range(total_gens):
            col = [ctx.zero()] * len(M.gens)
            if gen_offsets[k] <= g < gen_offsets[k] + len(M.gens):
                col[g - gen_offsets[k]] = ctx.one()
            proj_mat.append(col)
        projections.append(ModuleMap(S, M, proj_mat, check=False))
    return S, injections, projections


def tensor(M, N):
    """M (x) N presented by the block matrix (A (x) 1 | 1 (x) B)."""
    if M.ctx is not N.ctx:
        raise RingMismatch("tensor over different rings")
    ctx = M.ctx
    A = M.column_relations()
    B = N.column_relations()
    gm, gn = len(M.gens), len(N.gens)
    dm, dn = M.gen_degrees(), N.gen_degrees()
    rank = gm * gn
    shifts = tuple(dm[i] + dn[j] for i in range(gm) for j in range(gn))
    gens = []
    for k in range(rank):
        col = [ctx.zero()] * rank
        col[k] = ctx.one()
        gens.append(tuple(col))
    rels = []
    for u in A:  # u over M gens; u (x) e_j
        for j in range(gn):
            col = [ctx.zero()] * rank
            for i in range(gm):
                if u[i]:
                    col[i * gn + j] = u[i]
            rels.append(tuple(col))
    for v in B:
        for i in range(gm):
            col = [ctx.zero()] * rank
            for j in range(gn):
                if v[j]:
                    col[i * gn + j] = v[j]
            rels.append(tuple(col))
    T = subquotient(ctx, gens, rels, shifts, rank)
    return T


def tensor_map(f, N):
    """f (x) id_N for f a ModuleMap."""
    src = tensor(f.source, N)
    tgt = tensor(f.target, N)
    gn = len(N.gens)
    mat = []
    for j in range(len(f.source.gens)):
        for b in range(gn):
            col = [f.target.ctx.zero()] * (len(f.target.gens) * gn)
            for i, entry in enumerate(f.mat[j]):
                if entry:
                    col[i * gn + b] = entry
            mat.append(col)
    return ModuleMap(src, tgt, mat, f.degree, check=False), src, tgt


def hom_module(M, N):
    """Hom_R(M, N) and a converter from its elements to ModuleMaps.

    Computed as the kernel of Hom(F0, N) -> Hom(F1, N) for a presentation
    F1 -> F0 -> M (F0 on the stored generators, F1 on the column relations).
    """
    if M.ctx is not N.ctx:
        raise RingMismatch("Hom over different rings")
    ctx = M.ctx
    gm = len(M.gens)
    dm = M.gen_degrees()
    colrels = M.column_relations()
    source_parts = [twist(N, d) for d in dm]
    if not source_parts:
        Z = subquotient(ctx, [], [], (0,), 1)
        return Z, lambda coords, degree=0: zero_map(M, N)
    S0, _, _ = direct_sum(*source_parts) if gm > 1 else (source_parts[0], None, None)
    if not colrels:
        H = S0
        hom_to_map = _hom_converter(M, N, H, gm)
        return H, hom_to_map
    rel_degs = [vec_degree(u, dm) for u in colrels]
    target_parts = [twist(N, d) for d in rel_degs]
    S1, _, _ = (
        direct_sum(*target_parts) if len(target_parts) > 1 else (target_parts[0], None, None)
    )
    gn = len(N.gens)
    mat = []
    for j in range(gm):
        for a in range(gn):
            col = [ctx.zero()] * (len(colrels) * gn)
            for k, u in enumerate(colrels):
                if u[j]:
                    col[k * gn + a] = u[j]
            mat.append(col)
    h = ModuleMap(S0, S1, mat, check=False)
    H, incl = kernel(h)
    hom_to_map = _hom_converter(M, N, H, gm, incl)
    return H, hom_to_map


def _hom_converter(M, N, H, gm, incl=None):
    gn = len(N.gens)

    def element_as_map(coords, degree=0):
        """Rebuild a Hom element (coordinates over H's generators) as a map."""
        if incl is not None:
            flat = incl.apply_coords(coords)
        else:
            flat = coords
        mat = []
        for j in range(gm):
            mat.append(tuple(flat[j * gn + a] for a in range(gn)))
        return ModuleMap(M, N, mat, degree, check=False)

    return element_as_map


def hom_induced_post(f, K):
    """Hom(K, f): Hom(K, source) -> Hom(K, target) by postcomposition."""
    HS, conv_s = hom_module(K, f.source)
    HT, _ = hom_module(K, f.target)
    mat = []
    for j in range(len(HS.gens)):
        coords = [HS.ctx.zero()] * len(HS.gens)
        coords[j] = HS.ctx.one()
        phi = conv_s(coords, degree=HS.gen_degrees()[j])
        comp = f.compose(phi)  # K -> target
        amb = [comp.target.coords_to_ambient(col) for col in comp.mat]
        flat = []
        for col in amb:
            flat.extend(col)
        flat_vec = tuple(flat)
        mat.append(HT.express_in_gens(flat_vec))
    return ModuleMap(HS, HT, mat, f.degree, check=False), HS, HT


# ---------------------------------------------------------------------------
# minimization


def minimize(M):
    """Minimal-generator copy of M with the comparison maps (proj, incl)."""
    ctx = M.ctx
    if not M.gens:
        return M, identity_map(M), identity_map(M)
    kept = groebner.minimal_generator_indices(
        list(M.gens), ctx, M.rank, M.shifts, extra=M.rels
    )
    kept_cols = [M.gens[i] for i in kept]
    Mmin = GradedModule(ctx, M.rank, M.shifts, kept_cols, M.rels)
    Mmin._cache["rels_gb"] = M.rels_gb()
    incl_mat = []
    for i in kept:
        col = [ctx.zero()] * len(M.gens)
        col[i] = ctx.one()
        incl_mat.append(col)
    incl = ModuleMap(Mmin, M, incl_mat, check=False)
    if kept_cols:
        sols, bad = groebner.lift_through(
            kept_cols, list(M.gens), ctx, M.rank, M.shifts, extra=M.rels
        )
        if sols is None:
            raise InternalConsistencyError("minimization lost a generator")
        proj = ModuleMap(M, Mmin, list(sols), check=False)
    else:
        proj = zero_map(M, Mmin)
    return Mmin, proj, incl


# ---------------------------------------------------------------------------
# annihilators and invariants


def annihilator(M):
    """ann(M) as a reduced Groebner basis, via one colon per generator."""
    ctx = M.ctx
    if not M.gens or M.is_zero():
        return groebner.reduced_ideal_gb(ctx, [ctx.one()])
    result = None
    for col in M.gens:
        cols = [col] + list(M.rels)
        syz = groebner.syzygies(cols, ctx, M.rank, M.shifts, minimize=False)
        quot = groebner.reduced_ideal_gb(ctx, [s[0] for s in syz if s[0]])
        result = (
            quot
            if result is None
            else groebner.ideal_intersection(result, quot, ctx)
        )
    return result


@dataclass(frozen=True)
class InvariantReport:
    dim: object
    depth: object
    grade: object
    pd: object
    cod: object
    pd_ambient: object


def ring_module(ctx):
    key = "ring_module"
    if key not in ctx._cache:
        ctx._cache[key] = free_module(ctx, 1)
    return ctx._cache[key]


def ring_dim(ctx):
    key = "ring_dim"
    if key not in ctx._cache:
        ctx._cache[key] = ring_module(ctx).dim()
    return ctx._cache[key]


def ring_depth(ctx):
    key = "ring_depth"
    if key not in ctx._cache:
        from . import homalg

        ctx._cache[key] = homalg.depth(ring_module(ctx))
    return ctx._cache[key]


def ring_is_cm(ctx):
    return ring_dim(ctx) == ring_depth(ctx)


def grade(M):
    """grade(M) = min{i : Ext^i(M, R) != 0}; +inf for the zero module.

    Over a Cohen-Macaulay context this equals dim R - dim M (Rees), which is
    how it is computed there; the Ext search is the general fallback.
    """
    if M.is_zero():
        return math.inf
    hit = M._cache.get("grade")
    if hit is not None:
        return hit
    ctx = M.ctx
    if ring_is_cm(ctx):
        val = ring_dim(ctx) - M.dim()
    else:
        from . import homalg

        val = None
        R1 = ring_module(ctx)
        for i in range(ring_dim(ctx) + 1):
            if not homalg.ext(i, M, R1).is_zero():
                val = i
                break
        if val is None:
            raise InternalConsistencyError("grade exceeded dim R on a nonzero module")
    M._cache["grade"] = val
    return val


def is_regular_sequence(ctx, seq):
    """Prefix test: grade(f_1..f_k) = k for every k."""
    for k in range(1, len(seq) + 1):
        Q = cyclic_module(ctx, seq[:k])
        if Q.is_zero():
            return False
        if grade(Q) != k:
            return False
    return True


def transport(M, ctx2):
    """Reinterpret a module annihilated by the new defining ideal."""
    gens = [tuple(ctx2.lift_poly(f) for f in col) for col in M.gens]
    rels = [tuple(ctx2.lift_poly(f) for f in col) for col in M.rels]
    return subquotient(ctx2, gens, rels, M.shifts, M.rank)


def invariants(M):
    """dim/depth/grade/pd/cod, with the Auslander-Buchsbaum cross-check."""
    from . import homalg

    if M.is_zero():
        return InvariantReport(None, None, math.inf, None, None, 0)
    ctx = M.ctx
    d = M.dim()
    dep = homalg.depth(M)
    pd_amb = homalg.ambient_pd(M)
    m = ctx.m
    if pd_amb + dep != m:
        raise InternalConsistencyError(
            f"Auslander-Buchsbaum violated: pd_S={pd_amb}, depth={dep}, m={m}"
        )
    gr = grade(M)
    if ctx.defining:
        pd = homalg.projective_dimension(M)
    else:
        pd = pd_amb
    cod = ring_dim(ctx) - d
    if pd is not math.inf and gr > pd:
        raise InternalConsistencyError("grade exceeds finite projective dimension")
    return InvariantReport(d, dep, gr, pd, cod, pd_amb)

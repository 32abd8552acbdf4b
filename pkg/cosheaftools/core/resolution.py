"""
Projective resolutions by sums of representable cosheaves and the derived
colimit (higher colimit) homology they compute.

Stage 0 covers F with one representable summand c_x(Z^g) per element x,
where g is the generator count of F(x). Every later stage covers the kernel
of the previous transformation. In economical mode a later stage only adds
the kernel generators at y that are not already reached from the elements
covering y; the full mode covers every kernel generator.
"""
import logging
import random
from dataclasses import dataclass, field

from cosheaftools.algebra.linalg import IntMatrix, in_column_lattice
from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, AbHom
from cosheaftools.common.exceptions import InternalConsistencyError
from cosheaftools.common import utils
from cosheaftools.core.chains import ChainComplex, homology
from cosheaftools.core.cosheaf import (
    NatTrans,
    compose_transformations,
    cosheaf_direct_sum,
    hat_eval,
    induced_on_colimit,
    kernel_functor,
    skyscraper,
)

log = logging.getLogger(__name__)

DEFAULT_EXTRA_DEPTH = 2


@dataclass
class Stage:
    """P_n as a list of representable summands (element, rank) and the
    transformation from P_n to the previous stage (or to F)."""
    cosheaf: object
    summands: list
    map: NatTrans

    @property
    def rank(self):
        return sum(m for _, m in self.summands)


@dataclass
class Resolution:
    cosheaf: object
    depth: int
    stages: list = field(default_factory=list)


def representable_sum(P, summands):
    """The direct sum of c_x(Z^m) over the (x, m) summands, in order."""
    return cosheaf_direct_sum(
        [skyscraper(P, x, AbGroup.free(m)) for x, m in summands], base=P
    )


def _offsets_at(P, summands, y):
    """Generator offset of each summand inside P_n(y), or None when the
    summand vanishes at y."""
    offsets = []
    total = 0
    for x, m in summands:
        if P.leq(y, x):
            offsets.append(total)
            total += m
        else:
            offsets.append(None)
    return offsets


def _cover(G, chosen):
    """
    Cover G by representables: one summand c_x(Z^k) for the k vectors chosen
    at x, sending its basis to those vectors of G(x).
    """
    P = G.base
    summands = [(x, len(chosen[x])) for x in P.elements if chosen[x]]
    cover = representable_sum(P, summands)
    components = {}
    for y in P.elements:
        columns = []
        for x, _ in summands:
            if not P.leq(y, x):
                continue
            structure = G.map_between(x, y).matrix
            columns.extend(structure.apply(v) for v in chosen[x])
        components[y] = AbHom(
            cover.groups[y], G.groups[y],
            IntMatrix.from_columns(columns, G.groups[y].gens)
        )
    return cover, NatTrans(cover, G, components), summands


def _basis(n):
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def _all_generators(G, rng=None):
    chosen = {}
    for x in G.base.elements:
        vectors = _basis(G.groups[x].gens)
        if rng is not None:
            rng.shuffle(vectors)
        chosen[x] = vectors
    return chosen


def _economical_generators(G):
    """
    Walk the poset top-down. At y the lattice already reached is spanned by
    the relations of G(y) and the images of the covering maps; each basis
    vector outside it is added and joins the lattice.
    """
    P = G.base
    chosen = {}
    for y in reversed(P.linear_extension()):
        n = G.groups[y].gens
        reached = G.groups[y].relations.columns()
        for upper in P.upper_covers[y]:
            reached.extend(G.maps[(upper, y)].matrix.columns())
        chosen[y] = []
        for e in _basis(n):
            if not in_column_lattice(IntMatrix.from_columns(reached, n), e):
                chosen[y].append(e)
                reached.append(e)
    return chosen


def projective_resolution(F, depth, economical=True, shuffle_seed=None):
    """
    Build stages P_0 .. P_depth. *shuffle_seed* permutes the generator order
    of the stage-0 cover, which must not change any homology.
    """
    if depth < 0:
        raise ValueError('Resolution depth must be nonnegative')
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    resolution = Resolution(F, depth)
    cover, epsilon, summands = _cover(F, _all_generators(F, rng))
    resolution.stages.append(Stage(cover, summands, epsilon))
    for n in range(1, depth + 1):
        previous = resolution.stages[-1]
        K, inclusion = kernel_functor(previous.map)
        if economical:
            chosen = _economical_generators(K)
        else:
            chosen = _all_generators(K)
        cover, onto_kernel, summands = _cover(K, chosen)
        d = compose_transformations(inclusion, onto_kernel)
        resolution.stages.append(Stage(cover, summands, d))
        log.debug('Resolution stage {0}: {1} summand(s), rank {2}'.format(
            n, len(summands), resolution.stages[-1].rank
        ))
    return resolution


def verify_exactness(resolution):
    """
    Check at every costalk that P_0 -> F is onto and that
    P_{n+1} -> P_n -> P_{n-1} is exact for n < depth.
    """
    stages = resolution.stages
    for y in resolution.cosheaf.base.elements:
        epsilon = stages[0].map.components[y]
        if not ab.is_trivial(ab.cokernel(epsilon)[0]):
            raise InternalConsistencyError(
                'Stage 0 does not cover the costalk at {0!r}'.format(y)
            )
        for n in range(min(resolution.depth, len(stages) - 1)):
            incoming = stages[n + 1].map.components[y]
            outgoing = stages[n].map.components[y]
            if not ab.homology_at(incoming, outgoing).is_trivial:
                raise InternalConsistencyError(
                    'Resolution is not exact at stage {0}, costalk '
                    '{1!r}'.format(n, y)
                )
    return True


def _global_offsets(summands):
    offsets = []
    total = 0
    for _, m in summands:
        offsets.append(total)
        total += m
    return offsets, total


def collapsed_boundary(P, stage, previous):
    """
    The map of global values P_n(X) -> P_{n-1}(X). Each representable
    c_x(Z^m) has global value Z^m, and the column of a generator is its
    component at x placed blockwise.
    """
    col_offsets, cols = _global_offsets(stage.summands)
    row_offsets, rows = _global_offsets(previous.summands)
    data = [[0] * cols for _ in range(rows)]
    for s, (x, m) in enumerate(stage.summands):
        local_cols = _offsets_at(P, stage.summands, x)[s]
        local_rows = _offsets_at(P, previous.summands, x)
        component = stage.map.components[x].matrix
        for t, (_, k) in enumerate(previous.summands):
            if local_rows[t] is None:
                continue
            for i in range(k):
                row = data[row_offsets[t] + i]
                for j in range(m):
                    row[col_offsets[s] + j] += component[
                        local_rows[t] + i, local_cols + j
                    ]
    source, target = AbGroup.free(cols), AbGroup.free(rows)
    return AbHom(source, target, IntMatrix.from_rows(data, cols))


def derived_complex(resolution, collapsed=True):
    """The chain complex P_0(X) <- P_1(X) <- ... <- P_depth(X)."""
    stages = resolution.stages
    P = resolution.cosheaf.base
    if collapsed:
        groups = [AbGroup.free(stage.rank) for stage in stages]
        boundaries = {
            n: collapsed_boundary(P, stages[n], stages[n - 1])
            for n in range(1, len(stages))
        }
    else:
        whole = P.whole()
        groups = [hat_eval(stage.cosheaf, whole) for stage in stages]
        boundaries = {
            n: induced_on_colimit(stages[n].map, P.elements)
            for n in range(1, len(stages))
        }
    return ChainComplex(groups, boundaries)


def default_depth(F, extra_depth=DEFAULT_EXTRA_DEPTH):
    return max(F.base.dimension(), 0) + extra_depth


def derived_homology(F, depth=None, collapsed=True, economical=True,
                     shuffle_seed=None):
    """
    Homology of the global values of a projective resolution, reported in
    degrees 0 .. depth-1.
    """
    if depth is None:
        depth = default_depth(F)
    with utils.Timer('derived pipeline', log, logging.DEBUG):
        resolution = projective_resolution(
            F, depth, economical=economical, shuffle_seed=shuffle_seed
        )
        verify_exactness(resolution)
        complex_ = derived_complex(resolution, collapsed=collapsed)
        return homology(complex_, 'derived', top=depth - 1)

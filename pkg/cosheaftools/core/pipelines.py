"""
Borel-Moore and Cech chain complexes of cellular cosheaves, and the
subdivision functor onto order complexes.
"""
import logging

from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbHom
from cosheaftools.common.exceptions import PosetException
from cosheaftools.common import utils
from cosheaftools.core.chains import (
    ChainComplex,
    OrderedIncidence,
    homology,
)
from cosheaftools.core.cosheaf import (
    hat_eval,
    hat_extension,
    restrict,
    validate_cosheaf,
)
from cosheaftools.topology.poset import (
    Cover,
    nerve_intersections,
    principal_open,
)
from cosheaftools.topology.simplicial import (
    face_poset,
    order_complex,
    simplex_lookup,
)

log = logging.getLogger(__name__)


def block_hom(source_groups, target_groups, blocks):
    """
    Assemble a homomorphism between direct sums from matrix blocks keyed by
    (target index, source index). Missing blocks are zero.
    """
    source, _ = ab.direct_sum(source_groups)
    target, _ = ab.direct_sum(target_groups)
    row_offsets = _offsets(target_groups)
    col_offsets = _offsets(source_groups)
    data = [[0] * source.gens for _ in range(target.gens)]
    for (ti, si), block in blocks.items():
        r0, c0 = row_offsets[ti], col_offsets[si]
        for i in range(block.rows):
            row = data[r0 + i]
            for j in range(block.cols):
                row[c0 + j] += block[i, j]
    return AbHom(source, target, IntMatrix.from_rows(data, source.gens))


def _offsets(groups):
    offsets = []
    total = 0
    for G in groups:
        offsets.append(total)
        total += G.gens
    return offsets


def _check_base(K, F):
    if not F.base.same_order(face_poset(K)):
        raise PosetException(
            'The cosheaf is not defined on the face poset of the complex'
        )


def bm_complex(K, F):
    """
    Borel-Moore chains: degree n is the sum of F(sigma) over n-simplices and
    the boundary is sum_i (-1)^i F(sigma > sigma_i).
    """
    _check_base(K, F)
    incidence = OrderedIncidence(K)
    cells = [K.simplices_of_dim(n) for n in range(K.dimension + 1)]
    groups = [
        [F.groups[K.name(sigma)] for sigma in level] for level in cells
    ]
    boundaries = {}
    for n in range(1, len(cells)):
        position = {tau: i for i, tau in enumerate(cells[n - 1])}
        blocks = {}
        for si, sigma in enumerate(cells[n]):
            for _, tau in K.faces(sigma):
                structure = F.map_on(K.name(sigma), K.name(tau)).matrix
                blocks[(position[tau], si)] = structure.scale(
                    incidence.sign(sigma, tau)
                )
        boundaries[n] = block_hom(groups[n], groups[n - 1], blocks)
    summed = [ab.direct_sum(level)[0] for level in groups]
    return ChainComplex(summed, boundaries)


class CosheafEvaluator:
    """Open-set evaluator backed by hat_eval / hat_extension."""

    def __init__(self, F):
        self.cosheaf = F

    def value(self, U):
        return hat_eval(self.cosheaf, U)

    def extension(self, V, U):
        return hat_extension(self.cosheaf, V, U)


def cech_complex(cover, evaluator):
    """
    Cech chains of a cover: degree n sums the evaluator over strictly
    increasing (n+1)-tuples with nonempty intersection; the boundary is the
    alternating sum of the delete-one-index extensions.
    """
    nerve = nerve_intersections(cover)
    top = max((len(idx) for idx, _ in nerve), default=0) - 1
    levels = [[] for _ in range(top + 1)]
    meets = {}
    for idx, W in nerve:
        levels[len(idx) - 1].append(idx)
        meets[idx] = W
    groups = [
        [evaluator.value(meets[idx]) for idx in level] for level in levels
    ]
    boundaries = {}
    for n in range(1, top + 1):
        position = {idx: i for i, idx in enumerate(levels[n - 1])}
        blocks = {}
        for si, idx in enumerate(levels[n]):
            for i in range(len(idx)):
                face = idx[:i] + idx[i + 1:]
                ext = evaluator.extension(meets[idx], meets[face]).matrix
                blocks[(position[face], si)] = ext.scale(-1 if i % 2 else 1)
        boundaries[n] = block_hom(groups[n], groups[n - 1], blocks)
    summed = [ab.direct_sum(level)[0] for level in groups]
    return ChainComplex(summed, boundaries)


def vertex_cover(K, P=None):
    """The cover of the face poset by the open stars of the vertices."""
    P = P if P is not None else face_poset(K)
    return Cover(
        [principal_open(P, K.name((v,))) for v in K.vertices], P.whole()
    )


def minimal_cover(P):
    """The cover by principal open sets of the minimal elements."""
    return Cover(
        [principal_open(P, x) for x in P.minimal_elements()], P.whole()
    )


def bm_homology(K, F):
    with utils.Timer('Borel-Moore pipeline', log):
        return homology(bm_complex(K, F), 'bm')


def vertex_cover_cech(K, F):
    """Cech homology over the vertex star cover, evaluated with hat_eval."""
    _check_base(K, F)
    with utils.Timer('Cech pipeline', log):
        complex_ = cech_complex(
            vertex_cover(K, F.base), CosheafEvaluator(F)
        )
        return homology(complex_, 'cech')


def comparison_hypothesis_failures(F, cover, depth=None):
    """
    Intersections of the cover on which the restricted cosheaf has nonzero
    derived homology in some degree >= 1.
    """
    from cosheaftools.core.resolution import derived_homology
    failures = []
    for idx, W in nerve_intersections(cover):
        restricted = restrict(F, W.members)
        report = derived_homology(restricted, depth)
        if any(not c.is_trivial for c in report.classes[1:]):
            failures.append((idx, W.members))
    return failures


def cech_homology(F, cover, check_hypothesis=True):
    """
    Cech homology of F over an arbitrary cover. When requested, the
    hypothesis of the comparison theorem is checked on every intersection
    and failures are recorded in the report notes.
    """
    with utils.Timer('Cech pipeline', log):
        report = homology(
            cech_complex(cover, CosheafEvaluator(F)), 'cech'
        )
    if check_hypothesis:
        failures = comparison_hypothesis_failures(F, cover)
        report.notes['hypothesis_failures'] = [
            {'indices': list(idx), 'members': members}
            for idx, members in failures
        ]
        if failures:
            log.warning(
                'Comparison hypothesis fails on {0} intersection(s)'.format(
                    len(failures)
                )
            )
    return report


def delta_cosheaf(P, F):
    """
    The cosheaf on the face poset of the order complex of P with value
    F(x_n) on the chain x_0 < ... < x_n. Dropping the top of a chain maps by
    F(x_n -> x_{n-1}); dropping any other element is the identity.
    """
    if F.base is not P and not F.base.same_order(P):
        raise PosetException('The cosheaf is not defined on this poset')
    delta = order_complex(P)
    Q = face_poset(delta)
    chains = simplex_lookup(delta)
    groups = {name: F.groups[chains[name][-1]] for name in Q.elements}
    maps = {}
    for upper, lower in Q.hasse:
        top, below = chains[upper][-1], chains[lower][-1]
        if top == below:
            maps[(upper, lower)] = ab.identity_hom(F.groups[top])
        else:
            maps[(upper, lower)] = F.map_between(top, below)
    return validate_cosheaf(Q, groups, maps)


def subdivide(P, F):
    """Return the order complex of P with the cosheaf Delta(F) on it."""
    return order_complex(P), delta_cosheaf(P, F)


def bm_poset(P, F, pipeline='bm'):
    """Borel-Moore homology of a cosheaf on an arbitrary poset, computed on
    its order complex."""
    with utils.Timer('Borel-Moore pipeline on the order complex', log):
        delta, subdivided = subdivide(P, F)
        return homology(bm_complex(delta, subdivided), pipeline)

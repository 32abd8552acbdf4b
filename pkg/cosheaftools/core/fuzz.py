"""
Seeded random corpus for the pipeline cross-check.

Every instance is drawn from its own ``random.Random`` seeded with
"<seed>:<index>", so a corpus run is reproducible and any single instance can
be replayed alone.
"""
import logging
import random
from dataclasses import dataclass, field

from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, AbHom
from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.common import utils
from cosheaftools.core.cosheaf import (
    NatTrans,
    cokernel_functor,
    constant_cosheaf,
    cosheaf_direct_sum,
)
from cosheaftools.core.crosscheck import crosscheck
from cosheaftools.core.resolution import representable_sum
from cosheaftools.topology.poset import validate_poset
from cosheaftools.topology.simplicial import SimplicialComplex, face_poset

log = logging.getLogger(__name__)

TORSION_CHOICES = (2, 3, 4, 6, 8)
MAX_TORSION = 8


def instance_rng(seed, index):
    return random.Random('{0}:{1}'.format(seed, index))


def random_complex(rng, max_vertices=6, max_dimension=3):
    """A few random maximal simplices on up to *max_vertices* vertices,
    closed under faces."""
    n = rng.randint(1, max_vertices)
    vertices = ['v{0}'.format(i) for i in range(n)]
    simplices = []
    for _ in range(rng.randint(1, 4)):
        size = rng.randint(1, min(max_dimension + 1, n))
        simplices.append(rng.sample(vertices, size))
    return SimplicialComplex.closure(vertices, simplices)


def random_poset(rng, max_elements=5, density=0.4):
    """A random poset on p0..p(n-1) in which p_j may lie above p_i for i < j."""
    n = rng.randint(1, max_elements)
    elements = ['p{0}'.format(i) for i in range(n)]
    above = [1 << i for i in range(n)]
    for j in range(n):
        for i in range(j):
            if rng.random() < density:
                above[i] |= 1 << j
    # transitive closure, processed from the top down
    for i in reversed(range(n)):
        for j in range(i + 1, n):
            if above[i] >> j & 1:
                above[i] |= above[j]
    hasse = []
    for i in range(n):
        for j in range(i + 1, n):
            if not above[i] >> j & 1:
                continue
            between = any(
                above[i] >> k & 1 and above[k] >> j & 1
                for k in range(i + 1, j)
            )
            if not between:
                hasse.append((elements[j], elements[i]))
    return validate_poset(elements, hasse)


def random_projective(rng, P, max_summands=3, max_rank=2):
    """A direct sum of skyscrapers c_x(Z^m) at random elements."""
    summands = [
        (rng.choice(P.elements), rng.randint(1, max_rank))
        for _ in range(rng.randint(1, max_summands))
    ]
    return representable_sum(P, summands), summands


def _presented(rng, P, max_generators=3, max_relations=3):
    generators = [
        (rng.choice(P.elements), 1)
        for _ in range(rng.randint(1, max_generators))
    ]
    relations = [
        (rng.choice(P.elements), 1)
        for _ in range(rng.randint(0, max_relations))
    ]
    G = representable_sum(P, generators)
    R = representable_sum(P, relations)
    vectors = {
        z: [rng.randint(-2, 2) for _ in range(G.groups[z].gens)]
        for z, _ in relations
    }
    components = {}
    for y in P.elements:
        columns = [
            G.map_between(z, y).apply(vectors[z])
            for z, _ in relations if P.leq(y, z)
        ]
        components[y] = AbHom(
            R.groups[y], G.groups[y],
            IntMatrix.from_columns(columns, G.groups[y].gens)
        )
    F, _ = cokernel_functor(NatTrans(R, G, components))
    return F


def _within_bounds(F, max_rank):
    for x in F.base.elements:
        c = ab.iso_class(F.groups[x])
        if c.free_rank > max_rank or any(d > MAX_TORSION for d in c.torsion):
            return False
    return True


def random_cosheaf(rng, P, max_rank=3, attempts=20):
    """
    The cokernel of a random transformation between sums of representables,
    optionally plus a constant cyclic summand. Draws whose costalks exceed
    the rank or torsion bounds are redrawn.
    """
    for _ in range(attempts):
        F = _presented(rng, P)
        if rng.random() < 0.3:
            order = rng.choice(TORSION_CHOICES + (0,))
            F = cosheaf_direct_sum(
                [F, constant_cosheaf(P, AbGroup.cyclic(order))]
            )
        if _within_bounds(F, max_rank):
            return F
    log.debug('Falling back to the constant cosheaf after {0} draws'.format(
        attempts
    ))
    return constant_cosheaf(P, AbGroup.free(1))


def random_instance(seed, index, max_vertices=6, max_dimension=3,
                    max_rank=3):
    rng = instance_rng(seed, index)
    K = random_complex(rng, max_vertices, max_dimension)
    F = random_cosheaf(rng, face_poset(K), max_rank)
    return K, F


@dataclass
class FuzzSummary:
    seed: int
    count: int
    agreed: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches

    def to_record(self):
        return {
            'seed': self.seed,
            'count': self.count,
            'agreed': self.agreed,
            'mismatches': self.mismatches,
            'ok': self.ok,
        }

    def to_json(self):
        return utils.dump_json(self.to_record())


def run_corpus(seed, count, max_vertices=6, max_dimension=3, max_rank=3,
               parallel=False):
    """Cross-check *count* random instances and summarise the outcome."""
    summary = FuzzSummary(seed, count)
    with utils.Timer('fuzz corpus of {0} instance(s)'.format(count), log):
        for index in range(count):
            K, F = random_instance(
                seed, index, max_vertices, max_dimension, max_rank
            )
            verdict = crosscheck(K, F, parallel=parallel)
            if verdict.agree:
                summary.agreed += 1
            else:
                record = verdict.to_record()
                record['index'] = index
                record['simplices'] = sorted(
                    K.name(s) for s in K.simplices
                )
                summary.mismatches.append(record)
    return summary

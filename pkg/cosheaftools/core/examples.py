"""
The kernel counterexample: open-set kernels of a natural transformation
between cosheaves need not form a cosheaf.

On the poset b < a > c (open sets: empty, {a}, {a,b}, {a,c}, X) take F the
constant Z cosheaf and G the functor with Z at a and zero elsewhere. The
transformation alpha is the identity at a and zero at b and c. Its open-set
kernel is Z on every open set except the empty set and {a}, yet the colimit
over the cover {U_a, U_b, U_c} is Z^2.
"""
import logging
from dataclasses import dataclass

from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, IsoClass
from cosheaftools.common import utils
from cosheaftools.core.cosheaf import (
    CellularCosheaf,
    constant_cosheaf,
    hat_eval,
    kernel_functor,
    validate_natural_transformation,
)
from cosheaftools.core.precosheaf import (
    comparison_map,
    cosheaf_axiom_check,
    cosheafify,
    kernel_table,
    nerve_colimit,
)
from cosheaftools.topology.poset import Cover, principal_open, validate_poset

log = logging.getLogger(__name__)


@dataclass
class KernelCounterexample:
    nerve_colimit: IsoClass
    table_value: IsoClass
    is_cosheaf: bool
    cosheafified_value: IsoClass
    costalks: dict
    pointwise_kernel: dict
    comparison_costalk_isomorphisms: bool

    @property
    def verdict(self):
        return 'cosheaf' if self.is_cosheaf else 'not a cosheaf'

    def to_record(self):
        return {
            'example': 'paper-kernel',
            'nerve_colimit': self.nerve_colimit.to_record(),
            'table_value': self.table_value.to_record(),
            'cosheafified_value': self.cosheafified_value.to_record(),
            'costalks': {
                x: c.to_record() for x, c in sorted(self.costalks.items())
            },
            'verdict': self.verdict,
        }

    def to_json(self):
        return utils.dump_json(self.to_record())


def kernel_setup():
    """Return the poset, F, G and alpha: F -> G."""
    P = validate_poset(['a', 'b', 'c'], [('a', 'b'), ('a', 'c')])
    Z = AbGroup.free(1)
    zero = AbGroup.trivial()
    F = constant_cosheaf(P, Z)
    G = CellularCosheaf(
        P,
        {'a': Z, 'b': zero, 'c': zero},
        {('a', 'b'): ab.zero_hom(Z, zero), ('a', 'c'): ab.zero_hom(Z, zero)}
    )
    alpha = validate_natural_transformation(F, G, {
        'a': ab.identity_hom(Z),
        'b': ab.zero_hom(Z, zero),
        'c': ab.zero_hom(Z, zero),
    })
    return P, F, G, alpha


def kernel_counterexample():
    P, F, G, alpha = kernel_setup()
    X = P.whole()
    table = kernel_table(alpha)
    cover = Cover([principal_open(P, x) for x in ('a', 'b', 'c')], X)
    colimit, _ = nerve_colimit(table, cover)
    is_cosheaf = cosheaf_axiom_check(table, X, cover)
    plus = cosheafify(table)
    K, _ = kernel_functor(alpha)
    costalk_isos = all(
        ab.is_isomorphism(comparison_map(table, principal_open(P, x), plus))
        for x in P.elements
    )
    result = KernelCounterexample(
        nerve_colimit=ab.iso_class(colimit),
        table_value=ab.iso_class(table.value(X)),
        is_cosheaf=is_cosheaf,
        cosheafified_value=ab.iso_class(hat_eval(plus, X)),
        costalks={x: ab.iso_class(plus.groups[x]) for x in P.elements},
        pointwise_kernel={x: ab.iso_class(K.groups[x]) for x in P.elements},
        comparison_costalk_isomorphisms=costalk_isos,
    )
    log.info('Nerve colimit {0}, table value {1}: {2}'.format(
        result.nerve_colimit, result.table_value, result.verdict
    ))
    return result

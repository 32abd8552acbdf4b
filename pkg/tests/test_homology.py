"""
Tests for the chain complexes and the four homology pipelines: Borel-Moore,
Cech, derived colimits and Borel-Moore on the subdivision.
"""
import logging
import logging.config
import os
import random
import sys
import unittest

testroot = os.path.dirname(__file__) or '.'
sys.path.insert(0, os.path.abspath(os.path.join(testroot, os.path.pardir)))

from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, AbHom, IsoClass
from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.common.exceptions import (
    BoundaryError,
    DocumentException,
    PosetException,
)
from cosheaftools.core.chains import (
    ChainComplex,
    HomologyReport,
    OrderedIncidence,
    homology,
)
from cosheaftools.core.cosheaf import (
    constant_cosheaf,
    cosheaf_direct_sum,
    kernel_functor,
    skyscraper,
    validate_cosheaf,
    zero_cosheaf,
)
from cosheaftools.core.crosscheck import (
    CrosscheckVerdict,
    crosscheck,
    crosscheck_poset,
)
from cosheaftools.core.examples import kernel_setup
from cosheaftools.core.fuzz import (
    instance_rng,
    random_cosheaf,
    random_instance,
    random_poset,
    random_projective,
)
from cosheaftools.core.pipelines import (
    CosheafEvaluator,
    bm_complex,
    bm_homology,
    bm_poset,
    cech_complex,
    cech_homology,
    delta_cosheaf,
    minimal_cover,
    vertex_cover,
    vertex_cover_cech,
)
from cosheaftools.core.precosheaf import kernel_table
from cosheaftools.core.resolution import (
    derived_complex,
    derived_homology,
    projective_resolution,
    verify_exactness,
)
from cosheaftools.topology.poset import Cover, principal_open, validate_poset
from cosheaftools.topology.simplicial import SimplicialComplex, face_poset

# Blackhole log messages from cosheaftools
logging.config.dictConfig({'version': 1})

Z = AbGroup.free(1)
ZERO = AbGroup.trivial()


def m(rows):
    return IntMatrix.from_rows(rows)


def hollow_triangle():
    return SimplicialComplex.closure(
        ['a', 'b', 'c'], [['a', 'b'], ['a', 'c'], ['b', 'c']]
    )


def full_triangle():
    return SimplicialComplex.closure(['a', 'b', 'c'], [['a', 'b', 'c']])


def constant_on(K, A=Z):
    return constant_cosheaf(face_poset(K), A)


def one_vertex(A):
    K = SimplicialComplex.closure(['v'], [])
    return K, validate_cosheaf(face_poset(K), {'v': A}, {})


def classes(report, count):
    return list(report.padded(count))


class TestChainComplex(unittest.TestCase):

    def test_zero_complex(self):
        report = homology(ChainComplex([ZERO, ZERO], {}))
        self.assertTrue(all(c.is_trivial for c in report.classes))

    def test_multiplication_by_three(self):
        C = ChainComplex([Z, Z], {1: AbHom(Z, Z, m([[3]]))})
        report = homology(C)
        self.assertEqual(report.degree(0), IsoClass(0, (3,)))
        self.assertEqual(report.degree(1), IsoClass(0))

    def test_nonzero_square_rejected(self):
        identity = AbHom(Z, Z, m([[1]]))
        with self.assertRaises(BoundaryError):
            ChainComplex([Z, Z, Z], {1: identity, 2: identity})

    def test_square_zero_modulo_relations(self):
        # Doubling into Z/2 then the identity on Z/2 is zero.
        Z2 = AbGroup.cyclic(2)
        C = ChainComplex(
            [Z2, Z2, Z],
            {1: AbHom(Z2, Z2, m([[1]])), 2: AbHom(Z, Z2, m([[2]]))}
        )
        self.assertEqual(homology(C).degree(0), IsoClass(0))

    def test_degrees_past_top_are_trivial(self):
        report = homology(ChainComplex([Z], {}))
        self.assertEqual(report.degree(5), IsoClass(0))
        self.assertEqual(report.degree(-1), IsoClass(0))


class TestOrderedIncidence(unittest.TestCase):

    def test_signs_follow_omitted_vertex(self):
        incidence = OrderedIncidence(full_triangle())
        self.assertEqual(incidence.sign(('a', 'b'), ('b',)), 1)
        self.assertEqual(incidence.sign(('a', 'b'), ('a',)), -1)
        self.assertEqual(incidence.sign(('a', 'b', 'c'), ('a', 'c')), -1)
        self.assertEqual(incidence.sign(('a', 'b', 'c'), ('a', 'b')), 1)

    def test_double_boundary_cancels(self):
        K = SimplicialComplex.closure(
            ['a', 'b', 'c', 'd'], [['a', 'b', 'c', 'd']]
        )
        self.assertTrue(OrderedIncidence(K).double_boundary_cancels())


class TestBorelMoore(unittest.TestCase):

    def test_one_vertex(self):
        K, F = one_vertex(AbGroup.cyclic(6))
        report = bm_homology(K, F)
        self.assertEqual(report.degree(0), IsoClass(0, (6,)))
        self.assertEqual(report.pipeline, 'bm')

    def test_boundary_matrix_of_hollow_triangle(self):
        K = hollow_triangle()
        C = bm_complex(K, constant_on(K))
        self.assertEqual(
            C.boundary(1).matrix.to_rows(),
            [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]
        )

    def test_hollow_triangle(self):
        K = hollow_triangle()
        report = bm_homology(K, constant_on(K))
        self.assertEqual(classes(report, 2), [IsoClass(1), IsoClass(1)])

    def test_full_triangle(self):
        K = full_triangle()
        report = bm_homology(K, constant_on(K))
        self.assertEqual(
            classes(report, 3), [IsoClass(1), IsoClass(0), IsoClass(0)]
        )

    def test_coefficients_in_torsion_group(self):
        K = hollow_triangle()
        report = bm_homology(K, constant_on(K, AbGroup.cyclic(4)))
        self.assertEqual(
            classes(report, 2), [IsoClass(0, (4,)), IsoClass(0, (4,))]
        )

    def test_base_mismatch(self):
        K = hollow_triangle()
        with self.assertRaises(PosetException):
            bm_homology(K, constant_on(full_triangle()))

    def test_vanishing_above_dimension(self):
        for index in range(30):
            K, F = random_instance(17, index)
            C = bm_complex(K, F)
            self.assertEqual(C.top, K.dimension)
            report = homology(C, top=K.dimension + 2)
            for n in range(K.dimension + 1, K.dimension + 3):
                self.assertTrue(report.degree(n).is_trivial)


class TestCech(unittest.TestCase):

    def test_singleton_cover(self):
        P, F, G, alpha = kernel_setup()
        C = cech_complex(Cover([P.whole()]), CosheafEvaluator(F))
        self.assertEqual(C.top, 0)
        self.assertEqual(ab.iso_class(C.group(0)), IsoClass(1))

    def test_kernel_table_over_principal_cover(self):
        P, F, G, alpha = kernel_setup()
        cover = Cover([principal_open(P, x) for x in ('a', 'b', 'c')])
        report = homology(cech_complex(cover, kernel_table(alpha)), 'cech')
        self.assertEqual(report.degree(0), IsoClass(2))
        self.assertTrue(all(c.is_trivial for c in report.classes[1:]))

    def test_vertex_cover_matches_bm_chain_groups(self):
        K = hollow_triangle()
        F = constant_on(K)
        cech = cech_complex(vertex_cover(K), CosheafEvaluator(F))
        bm = bm_complex(K, F)
        self.assertEqual(cech.top, bm.top)
        for n in range(bm.top + 1):
            self.assertEqual(
                ab.iso_class(cech.group(n)), ab.iso_class(bm.group(n))
            )

    def test_hollow_triangle(self):
        K = hollow_triangle()
        report = vertex_cover_cech(K, constant_on(K))
        self.assertEqual(report.pipeline, 'cech')
        self.assertEqual(classes(report, 2), [IsoClass(1), IsoClass(1)])

    def test_one_vertex(self):
        K, F = one_vertex(AbGroup.cyclic(6))
        self.assertEqual(
            vertex_cover_cech(K, F).degree(0), IsoClass(0, (6,))
        )

    def test_disjoint_vertices(self):
        K = SimplicialComplex.closure(['u', 'v'], [])
        F = validate_cosheaf(
            face_poset(K), {'u': AbGroup.cyclic(2), 'v': Z}, {}
        )
        self.assertEqual(vertex_cover_cech(K, F).degree(0), IsoClass(1, (2,)))

    def test_hypothesis_recorded(self):
        P, F, G, alpha = kernel_setup()
        K, _ = kernel_functor(alpha)
        report = cech_homology(K, minimal_cover(P))
        self.assertEqual(report.degree(0), IsoClass(2))
        self.assertEqual(report.notes['hypothesis_failures'], [])


class TestSubdivision(unittest.TestCase):

    def test_single_point(self):
        P = validate_poset(['x'], [])
        F = constant_cosheaf(P, AbGroup.cyclic(3))
        delta = delta_cosheaf(P, F)
        self.assertEqual(delta.base.elements, ('x',))
        self.assertEqual(delta.groups['x'], AbGroup.cyclic(3))

    def test_two_chain(self):
        P = validate_poset(['x', 'y'], [('y', 'x')])
        F = validate_cosheaf(
            P, {'x': AbGroup.cyclic(2), 'y': Z}, {('y', 'x'): m([[1]])}
        )
        delta = delta_cosheaf(P, F)
        self.assertEqual(sorted(delta.base.elements), ['x', 'x<y', 'y'])
        self.assertEqual(delta.groups['x<y'], Z)
        self.assertEqual(delta.groups['x'], AbGroup.cyclic(2))
        drop_top = delta.maps[('x<y', 'x')]
        self.assertEqual(drop_top.target, AbGroup.cyclic(2))
        self.assertEqual(drop_top.matrix, m([[1]]))
        self.assertTrue(ab.is_isomorphism(delta.maps[('x<y', 'y')]))

    def test_constant_stays_constant(self):
        P = validate_poset(['a', 'b', 'c'], [('a', 'b'), ('a', 'c')])
        delta = delta_cosheaf(P, constant_cosheaf(P, Z))
        for x in delta.base.elements:
            self.assertEqual(delta.groups[x], Z)
        for pair in delta.base.hasse:
            self.assertTrue(ab.is_isomorphism(delta.maps[pair]))

    def test_separators_inside_element_names(self):
        P = validate_poset(['x', 'y', 'x<y'], [('y', 'x')])
        F = constant_cosheaf(P, Z)
        report = bm_poset(P, F)
        self.assertEqual(report.padded(2), (IsoClass(2), IsoClass(0)))
        self.assertTrue(crosscheck_poset(F).agree)

    def test_subdivision_preserves_bm(self):
        for index in range(40):
            K, F = random_instance(23, index, max_vertices=5)
            expected = bm_homology(K, F)
            subdivided = bm_poset(F.base, F, 'bm')
            top = K.dimension + 1
            self.assertEqual(
                expected.padded(top + 1), subdivided.padded(top + 1),
                'instance {0}'.format(index)
            )


class TestResolution(unittest.TestCase):

    def test_representable_resolves_itself(self):
        P = validate_poset(['a', 'b', 'c'], [('a', 'b'), ('a', 'c')])
        F = skyscraper(P, 'b', Z)
        resolution = projective_resolution(F, 3)
        self.assertTrue(verify_exactness(resolution))
        self.assertEqual(resolution.stages[0].summands, [('b', 1)])
        for x in P.elements:
            self.assertTrue(
                ab.is_isomorphism(resolution.stages[0].map.components[x])
            )
        for stage in resolution.stages[1:]:
            self.assertEqual(stage.rank, 0)

    def test_representable_of_maximal_element(self):
        P = validate_poset(['a', 'b', 'c'], [('a', 'b'), ('a', 'c')])
        resolution = projective_resolution(skyscraper(P, 'a', Z), 3)
        self.assertTrue(verify_exactness(resolution))
        report = derived_homology(skyscraper(P, 'a', Z))
        self.assertEqual(report.degree(0), IsoClass(1))
        self.assertTrue(all(c.is_trivial for c in report.classes[1:]))

    def test_zero_cosheaf(self):
        P = validate_poset(['a', 'b'], [('a', 'b')])
        resolution = projective_resolution(zero_cosheaf(P), 2)
        self.assertTrue(all(s.rank == 0 for s in resolution.stages))

    def test_kernel_functor_cover(self):
        P, F, G, alpha = kernel_setup()
        K, _ = kernel_functor(alpha)
        resolution = projective_resolution(K, 2)
        self.assertEqual(
            resolution.stages[0].summands, [('b', 1), ('c', 1)]
        )
        self.assertEqual(resolution.stages[1].rank, 0)

    def test_negative_depth(self):
        P = validate_poset(['a'], [])
        with self.assertRaises(ValueError):
            projective_resolution(constant_cosheaf(P, Z), -1)

    def test_exactness_on_random_cosheaves(self):
        rng = random.Random(31)
        for _ in range(40):
            P = random_poset(rng)
            F = random_cosheaf(rng, P)
            for economical in (True, False):
                resolution = projective_resolution(
                    F, max(P.dimension(), 0) + 2, economical=economical
                )
                self.assertTrue(verify_exactness(resolution))


class TestDerived(unittest.TestCase):

    def test_one_point(self):
        P = validate_poset(['x'], [])
        report = derived_homology(constant_cosheaf(P, Z))
        self.assertEqual(report.pipeline, 'derived')
        self.assertEqual(report.degree(0), IsoClass(1))
        self.assertTrue(all(c.is_trivial for c in report.classes[1:]))

    def test_kernel_functor(self):
        P, F, G, alpha = kernel_setup()
        K, _ = kernel_functor(alpha)
        report = derived_homology(K)
        self.assertEqual(report.degree(0), IsoClass(2))
        self.assertTrue(all(c.is_trivial for c in report.classes[1:]))

    def test_hollow_triangle(self):
        K = hollow_triangle()
        report = derived_homology(constant_on(K))
        self.assertEqual(classes(report, 3), [
            IsoClass(1), IsoClass(1), IsoClass(0)
        ])

    def test_depth_controls_reported_degrees(self):
        K = hollow_triangle()
        report = derived_homology(constant_on(K), depth=2)
        self.assertEqual(len(report.classes), 2)

    def test_projectives_are_acyclic(self):
        rng = random.Random(41)
        for _ in range(60):
            P = random_poset(rng)
            F, summands = random_projective(rng, P)
            report = derived_homology(F)
            self.assertTrue(
                all(c.is_trivial for c in report.classes[1:]),
                'summands {0}'.format(summands)
            )
            self.assertEqual(
                report.degree(0), IsoClass(sum(m for _, m in summands))
            )

    def test_independent_of_choices(self):
        rng = random.Random(43)
        for _ in range(30):
            P = random_poset(rng)
            F = random_cosheaf(rng, P)
            expected = derived_homology(F)
            for variant in (
                derived_homology(F, shuffle_seed=rng.randint(0, 999)),
                derived_homology(F, economical=False),
                derived_homology(F, collapsed=False),
            ):
                self.assertEqual(expected, variant)

    def test_collapsed_matches_global_values(self):
        P, F, G, alpha = kernel_setup()
        resolution = projective_resolution(F, 2)
        collapsed = derived_complex(resolution)
        direct = derived_complex(resolution, collapsed=False)
        for n in range(collapsed.top + 1):
            self.assertEqual(
                ab.iso_class(collapsed.group(n)),
                ab.iso_class(direct.group(n))
            )


class TestCrosscheck(unittest.TestCase):

    def test_hollow_triangle(self):
        K = hollow_triangle()
        verdict = crosscheck(K, constant_on(K))
        self.assertTrue(verdict.agree)
        self.assertEqual(
            sorted(verdict.reports),
            ['bm', 'bm-subdivision', 'cech', 'derived']
        )
        for report in verdict.reports.values():
            self.assertEqual(report.degree(0), IsoClass(1))
            self.assertEqual(report.degree(1), IsoClass(1))

    def test_extra_depth_must_be_positive(self):
        K = hollow_triangle()
        with self.assertRaises(ValueError):
            crosscheck(K, constant_on(K), extra_depth=0)
        P, F, G, alpha = kernel_setup()
        with self.assertRaises(ValueError):
            crosscheck_poset(F, extra_depth=-1)
        self.assertEqual(verdict.top, 2)

    def test_full_triangle_is_acyclic(self):
        K = full_triangle()
        for A in (Z, AbGroup.cyclic(6), AbGroup.from_invariants(2, (2,))):
            verdict = crosscheck(K, constant_on(K, A))
            self.assertTrue(verdict.agree)
            for report in verdict.reports.values():
                self.assertEqual(report.degree(0), ab.iso_class(A))
                for n in range(1, verdict.top + 1):
                    self.assertTrue(report.degree(n).is_trivial)

    def test_one_vertex(self):
        K, F = one_vertex(AbGroup.cyclic(6))
        verdict = crosscheck(K, F, parallel=True)
        self.assertTrue(verdict.agree)
        self.assertEqual(
            verdict.reports['derived'].degree(0), IsoClass(0, (6,))
        )

    def test_mismatch_is_reported(self):
        K = hollow_triangle()
        reports = dict(crosscheck(K, constant_on(K)).reports)
        reports['derived'] = HomologyReport(
            'derived', [IsoClass(1), IsoClass(0)]
        )
        verdict = CrosscheckVerdict(reports, 2)
        self.assertFalse(verdict.agree)
        record = verdict.to_record()
        self.assertEqual(record['first_mismatch']['degree'], 1)
        self.assertEqual(record['first_mismatch']['values']['derived'], '0')

    def test_poset_crosscheck(self):
        P, F, G, alpha = kernel_setup()
        K, _ = kernel_functor(alpha)
        verdict = crosscheck_poset(K)
        self.assertTrue(verdict.agree)
        self.assertEqual(verdict.skipped, [])
        self.assertEqual(verdict.reports['bm'].degree(0), IsoClass(2))

    def test_random_instances_agree(self):
        for index in range(25):
            K, F = random_instance(5, index)
            verdict = crosscheck(K, F)
            self.assertTrue(
                verdict.agree, 'instance {0}: {1}'.format(
                    index, verdict.to_json()
                )
            )
            for report in verdict.reports.values():
                self.assertTrue(report.degree(verdict.top).is_trivial)

    def test_torsion_direct_sum(self):
        rng = instance_rng(9, 0)
        K = hollow_triangle()
        P = face_poset(K)
        F = cosheaf_direct_sum(
            [random_cosheaf(rng, P), constant_cosheaf(P, AbGroup.cyclic(8))]
        )
        self.assertTrue(crosscheck(K, F).agree)


class TestHomologyReport(unittest.TestCase):

    def test_json_round_trip(self):
        report = HomologyReport(
            'bm', [IsoClass(2, (2, 4)), IsoClass(0, (10 ** 25,))]
        )
        text = report.to_json()
        self.assertIn('"10000000000000000000000000"', text)
        self.assertEqual(HomologyReport.from_json(text), report)

    def test_equality_pads_trivial_degrees(self):
        self.assertEqual(
            HomologyReport('bm', [IsoClass(1)]),
            HomologyReport('bm', [IsoClass(1), IsoClass(0)])
        )
        self.assertNotEqual(
            HomologyReport('bm', [IsoClass(1)]),
            HomologyReport('cech', [IsoClass(1)])
        )

    def test_malformed_reports(self):
        with self.assertRaises(DocumentException):
            HomologyReport.from_json('{"pipeline": "bm"')
        with self.assertRaises(DocumentException):
            HomologyReport.from_json(
                '{"pipeline": "bm", "H": [{"degree": 1, "rank": 0}]}'
            )


if __name__ == '__main__':
    unittest.main()

import itertools
import logging
import logging.config
import os
import random
import sys
import unittest

testroot = os.path.dirname(__file__) or '.'
sys.path.insert(0, os.path.abspath(os.path.join(testroot, os.path.pardir)))

from cosheaftools.common.exceptions import (
    OpenLatticeTooLarge,
    OpenSetException,
    PosetException,
)
from cosheaftools.core.fuzz import random_poset
from cosheaftools.topology.poset import (
    Cover,
    OpenSet,
    enumerate_opens,
    intersect,
    nerve_intersections,
    principal_open,
    subposet,
    union,
    validate_poset,
)
from cosheaftools.topology.simplicial import (
    SimplicialComplex,
    face_poset,
    order_complex,
)

# Blackhole log messages from cosheaftools
logging.config.dictConfig({'version': 1})


def three_point():
    """a covers b and c; the open sets are {}, {a}, {a,b}, {a,c}, X."""
    return validate_poset(['a', 'b', 'c'], [('a', 'b'), ('a', 'c')])


def chain(n):
    elements = ['x{0}'.format(i) for i in range(n)]
    return validate_poset(
        elements,
        [(elements[i + 1], elements[i]) for i in range(n - 1)]
    )


def antichain(n):
    return validate_poset(['x{0}'.format(i) for i in range(n)], [])


def brute_force_chains(P):
    count = 0
    for size in range(1, len(P) + 1):
        for subset in itertools.combinations(P.elements, size):
            if all(
                P.leq(x, y) or P.leq(y, x)
                for x, y in itertools.combinations(subset, 2)
            ):
                count += 1
    return count


def open_members(opens):
    return sorted(tuple(sorted(U.members)) for U in opens)


class TestValidatePoset(unittest.TestCase):

    def test_three_point_order(self):
        P = three_point()
        self.assertTrue(P.less('b', 'a'))
        self.assertTrue(P.less('c', 'a'))
        self.assertFalse(P.leq('b', 'c'))
        self.assertEqual(P.minimal_elements(), ['b', 'c'])
        self.assertEqual(P.maximal_elements(), ['a'])
        self.assertEqual(P.dimension(), 1)

    def test_single_element(self):
        P = validate_poset(['x'], [])
        self.assertEqual(len(P), 1)
        self.assertEqual(P.dimension(), 0)

    def test_cycle_rejected(self):
        with self.assertRaises(PosetException):
            validate_poset(['a', 'b'], [('a', 'b'), ('b', 'a')])

    def test_duplicates_rejected(self):
        with self.assertRaises(PosetException):
            validate_poset(['a', 'a'], [])

    def test_unknown_element_rejected(self):
        with self.assertRaises(PosetException):
            validate_poset(['a'], [('a', 'b')])

    def test_self_cover_rejected(self):
        with self.assertRaises(PosetException):
            validate_poset(['a'], [('a', 'a')])

    def test_transitive_pairs_dropped(self):
        P = validate_poset(
            ['x', 'y', 'z'], [('z', 'y'), ('y', 'x'), ('z', 'x')]
        )
        self.assertEqual(P.hasse, frozenset([('z', 'y'), ('y', 'x')]))
        self.assertTrue(P.less('x', 'z'))

    def test_specialization_round_trip(self):
        rng = random.Random(3)
        for _ in range(100):
            P = random_poset(rng)
            for x in P.elements:
                for y in P.elements:
                    self.assertEqual(
                        P.leq(x, y),
                        principal_open(P, y) <= principal_open(P, x)
                    )

    def test_subposet(self):
        P = chain(4)
        Q = subposet(P, ['x0', 'x2', 'x3'])
        self.assertEqual(Q.hasse, frozenset([('x2', 'x0'), ('x3', 'x2')]))


class TestOpenSets(unittest.TestCase):

    def test_principal_opens(self):
        P = three_point()
        self.assertEqual(principal_open(P, 'b').members, ['a', 'b'])
        self.assertEqual(principal_open(P, 'a').members, ['a'])
        C = chain(3)
        self.assertEqual(principal_open(C, 'x0').members, ['x0', 'x1', 'x2'])
        with self.assertRaises(PosetException):
            principal_open(P, 'z')

    def test_three_point_lattice(self):
        opens = enumerate_opens(three_point())
        self.assertEqual(
            open_members(opens),
            [(), ('a',), ('a', 'b'), ('a', 'b', 'c'), ('a', 'c')]
        )

    def test_counts(self):
        for n in range(1, 6):
            self.assertEqual(len(enumerate_opens(antichain(n))), 2 ** n)
            self.assertEqual(len(enumerate_opens(chain(n))), n + 1)

    def test_cap(self):
        with self.assertRaises(OpenLatticeTooLarge):
            enumerate_opens(antichain(6), cap=32)

    def test_alexandroff_property(self):
        rng = random.Random(5)
        for _ in range(40):
            P = random_poset(rng)
            opens = set(enumerate_opens(P))
            for U in opens:
                for V in opens:
                    self.assertIn(intersect(U, V), opens)
                    self.assertIn(union(U, V), opens)

    def test_set_operations(self):
        P = three_point()
        Ub, Uc = principal_open(P, 'b'), principal_open(P, 'c')
        self.assertEqual(intersect(Ub, Uc).members, ['a'])
        self.assertEqual(intersect(Ub, Ub), Ub)
        self.assertFalse(intersect(Ub, P.empty()))
        self.assertEqual(union(Ub, Uc), P.whole())
        with self.assertRaises(OpenSetException):
            intersect(Ub, principal_open(three_point(), 'b'))

    def test_from_members_requires_up_closed(self):
        with self.assertRaises(OpenSetException):
            OpenSet.from_members(three_point(), ['b'])

    def test_cover_union_checked(self):
        P = three_point()
        with self.assertRaises(OpenSetException):
            Cover([principal_open(P, 'b')], P.whole())


class TestNerve(unittest.TestCase):

    def test_three_point_cover(self):
        P = three_point()
        cover = Cover([principal_open(P, 'b'), principal_open(P, 'c')])
        result = [(idx, W.members) for idx, W in nerve_intersections(cover)]
        self.assertEqual(result, [
            ((0,), ['a', 'b']), ((1,), ['a', 'c']), ((0, 1), ['a'])
        ])

    def test_singleton_cover(self):
        P = three_point()
        cover = Cover([P.whole()])
        self.assertEqual(len(nerve_intersections(cover)), 1)

    def test_disjoint_cover(self):
        P = antichain(2)
        cover = Cover([principal_open(P, 'x0'), principal_open(P, 'x1')])
        self.assertEqual(
            [idx for idx, _ in nerve_intersections(cover)], [(0,), (1,)]
        )


class TestSimplicial(unittest.TestCase):

    def test_closure_adds_faces(self):
        K = SimplicialComplex.closure(['a', 'b', 'c'], [['c', 'a', 'b']])
        self.assertEqual(len(K.simplices), 7)
        self.assertEqual(K.dimension, 2)
        self.assertIn(('a', 'b', 'c'), K.simplices)

    def test_explicit_faces_deduplicated(self):
        K = SimplicialComplex.closure(
            ['a', 'b'], [['a', 'b'], ['a'], ['b', 'a']]
        )
        self.assertEqual(len(K.simplices), 3)

    def test_closure_rejects_unknown_vertex(self):
        with self.assertRaises(PosetException):
            SimplicialComplex.closure(['a'], [['a', 'b']])

    def test_edge_star(self):
        P = face_poset(SimplicialComplex.closure(['a', 'b'], [['a', 'b']]))
        self.assertEqual(principal_open(P, 'a').members, ['a', 'a,b'])
        self.assertEqual(principal_open(P, 'a,b').members, ['a,b'])

    def test_one_vertex(self):
        P = face_poset(SimplicialComplex.closure(['v'], []))
        self.assertEqual(P.elements, ('v',))

    def test_boundary_of_triangle(self):
        K = SimplicialComplex.closure(
            ['a', 'b', 'c'], [['a', 'b'], ['a', 'c'], ['b', 'c']]
        )
        P = face_poset(K)
        self.assertEqual(len(P), 6)
        for edge in ('a,b', 'a,c', 'b,c'):
            self.assertEqual(len(P.lower_covers[edge]), 2)
        self.assertEqual(
            intersect(principal_open(P, 'a'), principal_open(P, 'b')),
            principal_open(P, 'a,b')
        )

    def test_order_complex_of_three_point(self):
        D = order_complex(three_point())
        self.assertEqual(len(D.simplices_of_dim(0)), 3)
        self.assertEqual(
            sorted(D.name(s) for s in D.simplices_of_dim(1)), ['b<a', 'c<a']
        )
        self.assertEqual(D.dimension, 1)

    def test_order_complex_extremes(self):
        self.assertEqual(order_complex(antichain(4)).dimension, 0)
        D = order_complex(chain(4))
        self.assertEqual(len(D.simplices), 2 ** 4 - 1)
        self.assertEqual(D.dimension, 3)

    def test_separators_inside_element_names(self):
        P = validate_poset(['x', 'y', 'x<y', 'a,b'], [('y', 'x')])
        D = order_complex(P)
        names = sorted(D.name(s) for s in D.simplices)
        self.assertEqual(names, ['a,b', 'x', 'x<y', 'x\\<y', 'y'])
        Q = face_poset(D)
        self.assertEqual(len(Q), 5)
        self.assertTrue(Q.less('x', 'x<y'))
        self.assertEqual(Q.upper_covers['x\\<y'], [])

    def test_chain_counts(self):
        rng = random.Random(13)
        for _ in range(40):
            P = random_poset(rng)
            Q = face_poset(order_complex(P))
            self.assertEqual(len(Q), brute_force_chains(P))


if __name__ == '__main__':
    unittest.main()

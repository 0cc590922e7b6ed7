import numpy as np

from Products.UnorderedRules.dataio import CATEGORICAL
from Products.UnorderedRules.dataio import EQUALS
from Products.UnorderedRules.dataio import GREATER
from Products.UnorderedRules.dataio import LESS_EQ
from Products.UnorderedRules.dataio import NOT_EQUALS
from Products.UnorderedRules.dataio import NUMERIC
from Products.UnorderedRules.dataio import FeatureSchema
from Products.UnorderedRules.dataio import Literal
from Products.UnorderedRules.dataio import build_dataset
from Products.UnorderedRules.dataio import compute_cut_points
from Products.UnorderedRules.dataio import condition_mask
from Products.UnorderedRules.dataio import enumerate_refinements
from Products.UnorderedRules.dataio import instance_dataset
from Products.UnorderedRules.dataio import load_csv
from Products.UnorderedRules.dataio import load_instances
from Products.UnorderedRules.dataio import normalize_condition
from Products.UnorderedRules.dataio import refinement_masks
from Products.UnorderedRules.dataio import validate_literal
from Products.UnorderedRules.exceptions import DatasetException
from Products.UnorderedRules.exceptions import LoadError
from Products.UnorderedRules.exceptions import SchemaMismatchError
from Products.UnorderedRules.tests.rulestestcase import RulesTestCase
from Products.UnorderedRules.tests.rulestestcase import input_file
from Products.UnorderedRules.tests.rulestestcase import makeSuite
from Products.UnorderedRules.tests.utils import color_dataset


def six_values():
    return build_dataset([[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]],
                         ['a', 'a', 'b', 'b', 'a', 'b'], names=['x'],
                         num_cut_points=3)


class CutPointTest(RulesTestCase):

    def test_midpoint_quantiles(self):
        self.assertEqual(compute_cut_points(np.arange(1, 7), 3), [2.5, 4.5])
        cuts = compute_cut_points(np.arange(1, 101), 10)
        self.assertEqual(len(cuts), 9)
        self.assertTrue(50.5 in cuts)

    def test_degenerate_columns(self):
        self.assertEqual(compute_cut_points([3.0, 3.0, 3.0], 10), [])
        self.assertEqual(compute_cut_points([1.0, 2.0], 1), [])
        self.assertRaises(ValueError, compute_cut_points, [], 10)

    def test_cuts_strictly_inside(self):
        cuts = compute_cut_points([0.0] * 90 + [1.0] * 10, 100)
        self.assertEqual(cuts, [0.5])


class SchemaTest(RulesTestCase):

    def test_bad_schemas(self):
        self.assertRaises(DatasetException, FeatureSchema, 'x', 'ordinal')
        self.assertRaises(DatasetException, FeatureSchema, 'c', CATEGORICAL)
        self.assertRaises(DatasetException, FeatureSchema, 'c', CATEGORICAL,
                          ('a', 'a'))
        self.assertRaises(DatasetException, FeatureSchema, 'x', NUMERIC,
                          ('a',))
        self.assertRaises(DatasetException, FeatureSchema, 'x', NUMERIC,
                          (), (2.0, 1.0))

    def test_levels(self):
        feature = FeatureSchema('c', CATEGORICAL, ('red', 'blue'))
        self.assertEqual(feature.levelIndex('blue'), 1)
        self.assertEqual(feature.levelIndex('green'), -1)
        self.assertFalse(feature.isNumeric())

    def test_same_column_ignores_cut_points(self):
        feature = FeatureSchema('x', NUMERIC, cut_points=(1.0,))
        self.assertTrue(feature.sameColumn(feature.withCutPoints((2.0, 3.0))))
        self.assertFalse(feature.sameColumn(FeatureSchema('y', NUMERIC)))


class LiteralTest(RulesTestCase):

    def test_evaluate(self):
        column = np.array([1.0, 2.0, 3.0])
        self.assertArrayEqual(Literal(0, LESS_EQ, 2.0).evaluate(column),
                              [True, True, False])
        self.assertArrayEqual(Literal(0, GREATER, 2.0).evaluate(column),
                              [False, False, True])
        codes = np.array([0, 1, -1])
        self.assertArrayEqual(Literal(0, EQUALS, 1).evaluate(codes),
                              [False, True, False])
        self.assertArrayEqual(Literal(0, NOT_EQUALS, 1).evaluate(codes),
                              [True, False, True])

    def test_identity(self):
        self.assertEqual(Literal(0, LESS_EQ, 2), Literal(0, LESS_EQ, 2.0))
        self.assertNotEqual(Literal(0, LESS_EQ, 2.0), Literal(0, GREATER, 2.0))
        self.assertEqual(len(set([Literal(1, EQUALS, 0),
                                  Literal(1, EQUALS, 0)])), 1)
        self.assertLess(Literal(0, GREATER, 9.0).key(),
                        Literal(1, LESS_EQ, 0.0).key())
        self.assertRaises(ValueError, Literal, 0, '<', 1.0)

    def test_describe(self):
        ds = color_dataset()
        self.assertEqual(Literal(0, NOT_EQUALS, 1).describe(ds.features),
                         'color != green')
        ds = six_values()
        self.assertEqual(Literal(0, GREATER, 4.5).describe(ds.features),
                         'x > 4.5')

    def test_validate(self):
        ds = six_values()
        validate_literal(Literal(0, LESS_EQ, 2.5), ds.features)
        self.assertRaises(SchemaMismatchError, validate_literal,
                          Literal(0, LESS_EQ, 2.0), ds.features)
        self.assertRaises(SchemaMismatchError, validate_literal,
                          Literal(1, LESS_EQ, 2.5), ds.features)
        self.assertRaises(SchemaMismatchError, validate_literal,
                          Literal(0, EQUALS, 0), ds.features)
        colors = color_dataset()
        self.assertRaises(SchemaMismatchError, validate_literal,
                          Literal(0, EQUALS, 3), colors.features)


class DatasetTest(RulesTestCase):

    def test_build(self):
        ds = color_dataset()
        self.assertEqual(ds.features[0].levels, ('red', 'green', 'blue'))
        self.assertEqual(ds.class_labels, ('x', 'y'))
        self.assertEqual(ds.classCounts().tolist(), [6, 8])
        self.assertEqual(ds.featureNames(), ['color'])

    def test_fixed_class_labels(self):
        ds = build_dataset([[1, 2]], ['b', 'b'], class_labels=['a', 'b'])
        self.assertEqual(ds.classCounts().tolist(), [0, 2])
        self.assertRaises(DatasetException, build_dataset, [[1, 2]],
                          ['a', 'c'], class_labels=['a', 'b'])

    def test_needs_two_classes(self):
        self.assertRaises(DatasetException, build_dataset, [[1, 2]],
                          ['a', 'a'])

    def test_subset_recomputes_cut_points(self):
        ds = six_values()
        part = ds.subset([0, 1, 2, 3], num_cut_points=2)
        self.assertEqual(part.n, 4)
        self.assertEqual(part.features[0].cut_points, (2.5,))
        self.assertEqual(part.target.tolist(), [0, 0, 1, 1])
        kept = ds.subset([5, 4])
        self.assertEqual(kept.features, ds.features)
        self.assertEqual(kept.columns[0].tolist(), [6.0, 5.0])

    def test_instance(self):
        ds = color_dataset()
        row = instance_dataset({'color': 'blue'}, ds.features,
                               ds.class_labels)
        self.assertEqual(row.columns[0].tolist(), [2])
        self.assertFalse(row.hasTarget())
        row = instance_dataset(['purple'], ds.features, ds.class_labels)
        self.assertEqual(row.columns[0].tolist(), [-1])
        self.assertRaises(SchemaMismatchError, instance_dataset, ['red', 1],
                          ds.features, ds.class_labels)
        self.assertRaises(SchemaMismatchError, instance_dataset, {},
                          ds.features, ds.class_labels)
        numeric = six_values()
        self.assertRaises(SchemaMismatchError, instance_dataset, ['abc'],
                          numeric.features, numeric.class_labels)


class LoadTest(RulesTestCase):

    def test_load_weather(self):
        ds = load_csv(input_file('weather.csv'), 'play')
        self.assertEqual(ds.n, 14)
        self.assertEqual(ds.featureNames(),
                         ['outlook', 'temperature', 'humidity', 'windy'])
        self.assertEqual([f.kind for f in ds.features],
                         [CATEGORICAL, NUMERIC, NUMERIC, CATEGORICAL])
        self.assertEqual(ds.features[0].levels,
                         ('sunny', 'overcast', 'rainy'))
        self.assertEqual(ds.class_labels, ('no', 'yes'))
        self.assertEqual(ds.classCounts().tolist(), [5, 9])

    def test_categorical_override(self):
        ds = load_csv(input_file('weather.csv'), 'play',
                      {'humidity': CATEGORICAL})
        self.assertEqual(ds.features[2].kind, CATEGORICAL)
        self.assertEqual(ds.features[2].levels[:2], ('85', '90'))

    def test_missing_file(self):
        self.assertRaises(LoadError, load_csv, '/nonexistent/data.csv', 'y')

    def test_missing_value(self):
        path = self.writeFile('holes.csv', 'x,color,y\n1,red,a\n,blue,b\n')
        try:
            load_csv(path, 'y')
        except LoadError as exc:
            self.assertTrue("at row 2, column 'x'" in str(exc), str(exc))
        else:
            self.fail('LoadError not raised')

    def test_mixed_column(self):
        path = self.writeFile('mixed.csv', 'x,y\n1,a\nred,b\n3,a\n')
        self.assertRaises(LoadError, load_csv, path, 'y')
        ds = load_csv(path, 'y', {'x': CATEGORICAL})
        self.assertEqual(ds.features[0].levels, ('1', 'red', '3'))

    def test_bad_target(self):
        path = self.writeFile('one.csv', 'x,y\n1,a\n2,a\n')
        self.assertRaises(LoadError, load_csv, path, 'y')
        self.assertRaises(LoadError, load_csv, path, 'z')
        self.assertRaises(LoadError, load_csv, path, 'y', {'w': NUMERIC})

    def test_load_instances(self):
        ds = load_csv(input_file('weather.csv'), 'play')
        path = self.writeFile('new.csv',
                              'windy,humidity,temperature,outlook,extra\n'
                              'true,70,70,foggy,1\n')
        rows = load_instances(path, ds.features, ds.class_labels)
        self.assertEqual(rows.n, 1)
        self.assertFalse(rows.hasTarget())
        self.assertEqual(rows.columns[0].tolist(), [-1])
        self.assertEqual(rows.columns[3].tolist(), [1])
        labelled = load_instances(input_file('weather.csv'), ds.features,
                                  ds.class_labels, target_column='play')
        self.assertEqual(labelled.target.tolist(), ds.target.tolist())

    def test_load_instances_mismatch(self):
        ds = load_csv(input_file('weather.csv'), 'play')
        path = self.writeFile('short.csv', 'outlook,temperature\nsunny,70\n')
        self.assertRaises(SchemaMismatchError, load_instances, path,
                          ds.features, ds.class_labels)
        path = self.writeFile('text.csv', 'outlook,temperature,humidity,'
                              'windy\nsunny,warm,70,true\n')
        self.assertRaises(SchemaMismatchError, load_instances, path,
                          ds.features, ds.class_labels)


class RefinementTest(RulesTestCase):

    def describe(self, literals, ds):
        return [literal.describe(ds.features) for literal in literals]

    def test_root(self):
        ds = six_values()
        self.assertEqual(self.describe(enumerate_refinements((), ds), ds),
                         ['x <= 2.5', 'x > 2.5', 'x <= 4.5', 'x > 4.5'])

    def test_interval_bounds(self):
        ds = six_values()
        above = (Literal(0, GREATER, 2.5),)
        self.assertEqual(self.describe(enumerate_refinements(above, ds), ds),
                         ['x <= 4.5', 'x > 4.5'])
        below = (Literal(0, LESS_EQ, 2.5),)
        self.assertEqual(enumerate_refinements(below, ds), [])

    def test_categorical(self):
        ds = color_dataset()
        self.assertEqual(self.describe(enumerate_refinements((), ds), ds),
                         ['color == red', 'color != red',
                          'color == green', 'color != green',
                          'color == blue', 'color != blue'])
        not_red = (Literal(0, NOT_EQUALS, 0),)
        self.assertEqual(self.describe(enumerate_refinements(not_red, ds), ds),
                         ['color == green', 'color != green',
                          'color == blue', 'color != blue'])
        green = (Literal(0, EQUALS, 1),)
        self.assertEqual(enumerate_refinements(green, ds), [])

    def test_masks(self):
        ds = six_values()
        condition = (Literal(0, GREATER, 2.5),)
        cover = condition_mask(condition, ds)
        literals, masks = refinement_masks(condition, ds)
        self.assertEqual(masks.shape, (len(literals), ds.n))
        for literal, mask in zip(literals, masks):
            expected = condition_mask(condition + (literal,), ds)
            self.assertArrayEqual(mask, expected)
            self.assertTrue(0 < mask.sum() < cover.sum())

    def test_empty_cover(self):
        ds = six_values()
        literals, masks = refinement_masks((), ds,
                                           np.zeros(ds.n, dtype=bool))
        self.assertEqual(literals, [])
        self.assertEqual(masks.shape, (0, ds.n))

    def test_normalize(self):
        ds = six_values()
        condition = (Literal(0, GREATER, 1.0), Literal(0, LESS_EQ, 4.5),
                     Literal(0, GREATER, 2.5))
        normal = normalize_condition(condition, ds.features)
        self.assertEqual(normal, (Literal(0, GREATER, 2.5),
                                  Literal(0, LESS_EQ, 4.5)))
        self.assertArrayEqual(condition_mask(normal, ds),
                              condition_mask(condition, ds))
        colors = color_dataset()
        condition = (Literal(0, NOT_EQUALS, 0), Literal(0, EQUALS, 2))
        self.assertEqual(normalize_condition(condition, colors.features),
                         (Literal(0, EQUALS, 2),))


def test_suite():
    from unittest import TestSuite
    suite = TestSuite()
    suite.addTest(makeSuite(CutPointTest))
    suite.addTest(makeSuite(SchemaTest))
    suite.addTest(makeSuite(LiteralTest))
    suite.addTest(makeSuite(DatasetTest))
    suite.addTest(makeSuite(LoadTest))
    suite.addTest(makeSuite(RefinementTest))
    return suite

"""Cross-validated accuracy on real datasets.

Iris ships with scikit-learn. Set TURS_DATA_DIR to a directory holding
diabetes.csv (class in the last column) to run the diabetes benchmark too.
"""

import unittest

import pandas as pd
from sklearn.datasets import load_iris

from Products.UnorderedRules.dataio import load_csv
from Products.UnorderedRules.evaluation import cross_validate
from Products.UnorderedRules.search import SearchConfig
from Products.UnorderedRules.tests.rulestestcase import RulesTestCase
from Products.UnorderedRules.tests.rulestestcase import data_file
from Products.UnorderedRules.tests.rulestestcase import makeSuite

AUC_TOLERANCE = 0.05


def load_benchmark(name):
    path = data_file(name)
    target = pd.read_csv(path, nrows=0).columns[-1]
    return load_csv(path, target)


class BenchmarkTest(RulesTestCase):

    def evaluate(self, dataset):
        return cross_validate(dataset, 10, SearchConfig(), seed=0)

    def test_iris(self):
        frame = load_iris(as_frame=True).frame
        path = self.writeFile('iris.csv', frame.to_csv(index=False))
        report = self.evaluate(load_csv(path, 'target'))
        self.assertEqual(len(report.folds), 10)
        self.assertAlmostEqual(report.mean_auc, 0.964, delta=AUC_TOLERANCE)
        self.assertLessEqual(report.mean_total_literals, 20)

    @unittest.skipUnless(data_file('diabetes.csv'),
                         'diabetes.csv not available')
    def test_diabetes(self):
        report = self.evaluate(load_benchmark('diabetes.csv'))
        self.assertAlmostEqual(report.mean_auc, 0.766, delta=AUC_TOLERANCE)


def test_suite():
    from unittest import TestSuite
    suite = TestSuite()
    suite.addTest(makeSuite(BenchmarkTest))
    return suite

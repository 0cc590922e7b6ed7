"""The turs command: fit, predict, eval, inspect and regret.

Exit codes: 0 on success, 2 on bad input, 3 on an internal error such as
an invariant violation.
"""

import argparse
import logging
import sys

import pandas as pd

from Products.UnorderedRules import config
from Products.UnorderedRules.Marshall import load_model
from Products.UnorderedRules.Marshall import save_model
from Products.UnorderedRules.dataio import CATEGORICAL
from Products.UnorderedRules.dataio import load_csv
from Products.UnorderedRules.dataio import load_instances
from Products.UnorderedRules.evaluation import OVERLAP_CHOICES
from Products.UnorderedRules.evaluation import cross_validate
from Products.UnorderedRules.exceptions import ConfigurationError
from Products.UnorderedRules.exceptions import InvariantViolation
from Products.UnorderedRules.exceptions import RulesException
from Products.UnorderedRules.regret import log_regret
from Products.UnorderedRules.search import SearchConfig
from Products.UnorderedRules.search import fit_ruleset
from Products.UnorderedRules.surrogate import availableAggregations
from Products.UnorderedRules.utils import parse_int_list
from Products.UnorderedRules.utils import parse_name_list

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3

EXPLANATION_COLUMN = 'explanation'


def _min_leaf_sizes(text):
    try:
        return tuple(parse_int_list(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_data_options(parser):
    parser.add_argument('--data', required=True, help='training CSV file')
    parser.add_argument('--target', required=True, help='class column')
    parser.add_argument('--categorical', default='',
                        help='comma separated columns to treat as categorical')


def _add_search_options(parser):
    parser.add_argument('--num-cut-points', type=int,
                        default=config.NUM_CUT_POINTS)
    parser.add_argument('--beam-width', type=int, default=config.BEAM_WIDTH)
    parser.add_argument('--alpha', type=float, default=config.ALPHA)
    parser.add_argument('--num-candidates', type=int, default=None,
                        help='phase two seeds (default: beam width)')
    parser.add_argument('--min-leaf-sizes', type=_min_leaf_sizes,
                        default=config.MIN_LEAF_SIZES)
    parser.add_argument('--max-rules', type=int, default=config.MAX_RULES)
    parser.add_argument('--surrogate-aggregation',
                        choices=availableAggregations(),
                        default=config.SURROGATE_AGGREGATION)
    parser.add_argument('--no-surrogate', dest='use_surrogate',
                        action='store_false',
                        help='rank candidates by the final score instead')
    parser.add_argument('--single-phase', dest='two_phase',
                        action='store_false',
                        help='return the best phase one rule directly')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='turs',
        description='Truly unordered probabilistic rule sets.')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    fit = commands.add_parser('fit', help='learn a rule set')
    _add_data_options(fit)
    _add_search_options(fit)
    fit.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    fit.add_argument('--out', help='model file (default: print the rules)')
    fit.set_defaults(handler=do_fit)

    predict = commands.add_parser('predict', help='class probabilities')
    predict.add_argument('--model', required=True)
    predict.add_argument('--data', required=True)
    predict.add_argument('--target', default=None,
                         help='class column, checked against the model labels')
    predict.add_argument('--out', help='CSV file (default: stdout)')
    predict.set_defaults(handler=do_predict)

    evaluate = commands.add_parser('eval', help='stratified cross-validation')
    _add_data_options(evaluate)
    _add_search_options(evaluate)
    evaluate.add_argument('--folds', type=int, default=config.DEFAULT_FOLDS)
    evaluate.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    evaluate.add_argument('--jobs', type=int, default=1)
    evaluate.add_argument('--overlap-on', choices=OVERLAP_CHOICES,
                          default=config.OVERLAP_ON)
    evaluate.add_argument('--timings', action='store_true',
                          help='include wall times in the report')
    evaluate.add_argument('--report', help='JSON file (default: stdout)')
    evaluate.set_defaults(handler=do_eval)

    inspect = commands.add_parser('inspect', help='print a stored rule set')
    inspect.add_argument('--model', required=True)
    inspect.set_defaults(handler=do_inspect)

    regret = commands.add_parser('regret', help='log2 multinomial regret')
    regret.add_argument('n', type=int)
    regret.add_argument('num_classes', metavar='K', type=int)
    regret.set_defaults(handler=do_regret)
    return parser


def _search_config(args):
    return SearchConfig(beam_width=args.beam_width, alpha=args.alpha,
                        num_candidates=args.num_candidates,
                        min_leaf_sizes=args.min_leaf_sizes,
                        num_cut_points=args.num_cut_points,
                        max_rules=args.max_rules,
                        surrogate_aggregation=args.surrogate_aggregation,
                        use_surrogate=args.use_surrogate,
                        two_phase=args.two_phase, seed=args.seed)


def _load_training(args):
    overrides = dict((name, CATEGORICAL)
                     for name in parse_name_list(args.categorical))
    return load_csv(args.data, args.target, overrides, args.num_cut_points)


def _write(text, path, out):
    if path:
        with open(path, 'w', encoding='utf-8') as stream:
            stream.write(text)
    else:
        out.write(text)


def do_fit(args, out):
    search_config = _search_config(args)
    dataset = _load_training(args)
    ruleset = fit_ruleset(dataset, search_config)
    if args.out:
        save_model(ruleset, args.out)
    else:
        out.write('\n'.join(ruleset.describe()) + '\n')


def do_predict(args, out):
    ruleset = load_model(args.model)
    dataset = load_instances(args.data, ruleset.features,
                             ruleset.class_labels, target_column=args.target)
    probs, explanations = ruleset.predict_dataset(dataset)
    frame = pd.DataFrame(probs, columns=[str(label) for label
                                         in ruleset.class_labels])
    frame[EXPLANATION_COLUMN] = [str(e) for e in explanations]
    _write(frame.to_csv(index=False, float_format='%.17g'), args.out, out)


def do_eval(args, out):
    search_config = _search_config(args)
    dataset = _load_training(args)
    report = cross_validate(dataset, args.folds, search_config, args.seed,
                            args.overlap_on, args.jobs)
    _write(report.toJSON(args.timings), args.report, out)


def do_inspect(args, out):
    ruleset = load_model(args.model)
    out.write('\n'.join(ruleset.describe()) + '\n')


def do_regret(args, out):
    if args.n < 0 or args.num_classes < 1:
        raise ConfigurationError('need n >= 0 and K >= 1')
    out.write('%r\n' % log_regret(args.n, args.num_classes))


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=err,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        args.handler(args, out)
    except (InvariantViolation, ValueError) as exc:
        # bad input raises RulesException; a ValueError here is a bug
        err.write('turs: internal error: %s\n' % exc)
        return EXIT_INVARIANT
    except (RulesException, OSError) as exc:
        err.write('turs: %s\n' % exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

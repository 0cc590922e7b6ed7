PKG_NAME = "UnorderedRules"

## Literal universe
NUM_CUT_POINTS = 100 ## quantile cut points per numeric feature

## Beam search
BEAM_WIDTH = 5
ALPHA = 0.05 ## coverage diversity, entries share at most 1 - ALPHA (Jaccard)
NUM_CANDIDATES = None ## phase-one seeds handed to phase two, None means BEAM_WIDTH
MAX_RULES = 500 ## hard cap on the rule set size

## Surrogate score
MIN_LEAF_SIZES = (10, 30, 50, 70, 90) ## minimum leaf sizes tried for the trees
SURROGATE_AGGREGATION = 'max' ## name of the ISurrogateAggregation utility
#SURROGATE_AGGREGATION = 'min'  ## conservative reading

## Stop when the surrogate score equals the real score within this many bits
STOP_TOLERANCE = 1e-9

## Refuse brute-force enumerations above this many label sequences
BRUTEFORCE_LIMIT = 2 ** 24

## Evaluation
DEFAULT_FOLDS = 10
DEFAULT_SEED = 0
PROB_SUM_TOLERANCE = 1e-6 ## rows of a probability matrix must sum to one
OVERLAP_ON = 'test'

## Bump these when the JSON layouts change
REPORT_VERSION = 1
MODEL_FORMAT_VERSION = 1

from zope.interface import Interface, Invalid, invariant
from zope import schema


class ISearchConfig(Interface):
    """Hyperparameters of the rule set search
    """

    beam_width = schema.Int(title=u"Beam width", min=1, default=5)
    alpha = schema.Float(title=u"Coverage diversity", min=0.0, max=1.0,
                         default=0.05)
    num_candidates = schema.Int(title=u"Phase one seeds", min=1, default=5)
    min_leaf_sizes = schema.Tuple(title=u"Minimum leaf sizes",
                                  value_type=schema.Int(min=1),
                                  min_length=1)
    num_cut_points = schema.Int(title=u"Cut points per numeric feature",
                                min=1, default=100)
    max_rules = schema.Int(title=u"Maximum number of rules", min=0,
                           default=500)
    surrogate_aggregation = schema.TextLine(
        title=u"Name of the surrogate aggregation utility", default=u'max')
    use_surrogate = schema.Bool(title=u"Rank candidates by surrogate score",
                                default=True)
    two_phase = schema.Bool(title=u"Grow phase one seeds further",
                            default=True)
    stop_tolerance = schema.Float(title=u"Stopping tolerance in bits",
                                  min=0.0, default=1e-9)
    seed = schema.Int(title=u"Seed for fold shuffling", default=0)

    @invariant
    def seedsFitInBeam(config):
        if config.num_candidates > config.beam_width:
            raise Invalid("num_candidates (%s) must not exceed beam_width (%s)"
                          % (config.num_candidates, config.beam_width))


class ISurrogateAggregation(Interface):
    """Collapses the scores obtained for several minimum leaf sizes
    """

    def __call__(scores):
        """Return one log2 score"""

from urysel.providers import Logger


class ProviderError(Exception):
    def __init__(self, msg):
        Logger.fatal(msg)
        super().__init__(msg)


class ConfigError(Exception):
    pass


class WrongParameterValue(ConfigError):
    """ Exception raised if a parameter reaches a wrong numeric value
    """
    def __init__(self, param, value):
        self.msg = "Parameter '{}' has a wrong value ({}).".format(
            param, value
        )
        super().__init__(self.msg)

    def __str__(self):
        return self.msg


class ConstructionError(Exception):
    """Base class of the errors raised by the metric, domain and
    probabilistic constructions.

    Unlike ProviderError these errors are not logged on construction, the
    invariant suites catch them as part of their normal control flow.
    """
    def __init__(self, msg):
        self.msg = msg
        super().__init__(msg)

    def __str__(self):
        return self.msg


class NegativeInput(ConstructionError):
    def __init__(self, name, value):
        super().__init__(
            "Negative input '{}' ({}) rejected".format(name, value)
        )


class MismatchedSpace(ConstructionError):
    def __init__(self, tag1, tag2):
        self.tags = (tag1, tag2)
        super().__init__(
            "Points live in different spaces ({} vs. {})".format(tag1, tag2)
        )


class InvalidMetric(ConstructionError):
    """Matrix does not define a metric, see violations."""
    def __init__(self, violations):
        self.violations = violations
        super().__init__(
            "Invalid metric: {} violated axiom instance(s), first: {}".format(
                len(violations), violations[0] if violations else None
            )
        )


class UnknownPoint(ConstructionError):
    def __init__(self, point):
        self.point = point
        super().__init__("Unknown point: {}".format(point))


class InvalidRequest(ConstructionError):
    pass


class InadmissibleRequest(ConstructionError):
    """One-point extension request violating the metric axioms.

    :param request: the offending ExtensionRequest
    :param violations: list of violated pairs
    """
    def __init__(self, request, violations):
        self.request = request
        self.violations = violations
        super().__init__(
            "Inadmissible extension request {}: violated pair(s) {}".format(
                request, violations
            )
        )


class InconsistentRequirements(ConstructionError):
    """Approximate targets cannot be made admissible within the slack
    budget of a stage."""
    def __init__(self, stage, inequality, margin):
        self.stage = stage
        self.inequality = inequality
        self.margin = margin
        super().__init__(
            "Inconsistent requirements at stage {}: {} violated by {}".format(
                stage, inequality, margin
            )
        )


class NoWitness(ConstructionError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(
            "Balls do not intersect, failing pair: {}".format(pair)
        )


class UnknownSpaceKind(ConstructionError):
    def __init__(self, kind):
        super().__init__("Unknown space kind: {}".format(kind))


class NotDecidable(ConstructionError):
    pass


class RadiusScheduleViolated(ConstructionError):
    def __init__(self, stage, radius):
        self.stage = stage
        self.radius = radius
        super().__init__(
            "Stage {} has radius {} above the schedule".format(stage, radius)
        )


class EmptyStream(ConstructionError):
    pass


class InvalidDistribution(ConstructionError):
    pass


class LevelMismatch(ConstructionError):
    def __init__(self, levels):
        super().__init__(
            "Levels do not share the index: {}".format(levels)
        )


class LevelTooLarge(ConstructionError):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(
            "Level of size {} exceeds the limit {}".format(size, limit)
        )


class NotEnoughPoints(ConstructionError):
    def __init__(self, needed, available):
        super().__init__(
            "Level needs {} dense points, the space has {}".format(
                needed, available
            )
        )


class NotSemiconvex(ConstructionError):
    pass


class UnsupportedType(ConstructionError):
    pass


class TypeSyntaxError(ConstructionError):
    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(
            "Type syntax error in '{}' at {}: expected {}".format(
                text, position, expected
            )
        )


class EvaluationError(ConstructionError):
    pass


class UnknownSuite(ConstructionError):
    def __init__(self, name):
        super().__init__("Unknown suite: {}".format(name))

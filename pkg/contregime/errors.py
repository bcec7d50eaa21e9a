"""Exceptions raised across contregime."""


class ContRegimeError(Exception):
    """Base error. Keeps the message on the instance like every subclass."""

    def __init__(self, msg):
        super(ContRegimeError, self).__init__(msg)
        self.msg = msg


class InvalidArgumentError(ContRegimeError, ValueError):
    pass


class DomainError(ContRegimeError, ValueError):
    """A value lies outside the support of a discrete law."""


class PositivityError(ContRegimeError):
    """The regime law is not absolutely continuous against the propensity."""


class ScopeError(ContRegimeError):
    """The requested functional is not defined for this regime."""


class UnsupportedError(ContRegimeError):
    pass


class ResourceError(ContRegimeError):
    pass


class NumericalError(ContRegimeError, ArithmeticError):
    pass


class ConfigError(ContRegimeError):
    """Configuration validation failure.

    :param problems: list of (field_path, message) pairs, every problem found
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = ["%s: %s" % (path, message) for path, message in self.problems]
        super(ConfigError, self).__init__("invalid configuration\n  " +
                                          "\n  ".join(lines))

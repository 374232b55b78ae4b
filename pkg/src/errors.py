class ScarfError(Exception):
    pass


class ParameterError(ScarfError):
    pass


class RegimeError(ScarfError):
    pass


class LevelError(ScarfError):
    """Quantum number outside the normalizable range."""


class PoleError(ScarfError):
    pass


class NodeError(ScarfError):
    """Seed eigenfunction vanishes on the real line, so W_m has a pole."""


class PotentialValueError(ScarfError):
    pass


class EigensolverError(ScarfError):
    pass


class OutputError(ScarfError):
    pass

"""Exception hierarchy shared by all modules."""


class ConeFourierError(Exception):
    """Base class for library errors."""


class DomainError(ConeFourierError, ValueError):
    """Argument outside the domain of the function."""


class PoleError(ConeFourierError, ValueError):
    """Evaluation exactly at a pole of a meromorphic function."""


class PoleAtNonpositiveInteger(PoleError):
    """Gamma function evaluated at 0, -1, -2, ..."""


class NonConvergent(ConeFourierError, ArithmeticError):
    """Series or quadrature failed to reach the requested tolerance."""


class ContourInvalid(ConeFourierError, ValueError):
    """Integration path does not separate the two pole families."""


class IntegerDifference(ConeFourierError, ValueError):
    """Residue series undefined because two lower parameters differ by an integer."""


class OutOfRegime(ConeFourierError, ValueError):
    """Asymptotic formula requested outside its region of validity."""


class InsufficientSmoothness(ConeFourierError, ValueError):
    """Test function has fewer derivatives than the pairing requires."""


class QuadratureFailure(ConeFourierError, ArithmeticError):
    """Numerical integration did not converge."""


class ArityMismatch(ConeFourierError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class IndexOutOfRange(ConeFourierError, IndexError):
    """Coordinate index outside 0..n-1."""


class GridTooCoarse(ConeFourierError, ValueError):
    """Radial grid cannot resolve the kernel oscillation."""


class AliasingDetected(ConeFourierError, ValueError):
    """Spectrum has significant energy at the Nyquist frequency."""


class ParameterOutOfRange(ConeFourierError, ValueError):
    """Transform parameters outside the unitary range."""


class ResamplingError(ConeFourierError, ValueError):
    """Group action would require resampling beyond the supported accuracy."""


class OnSingularSupport(ConeFourierError, ValueError):
    """Kernel requested where it is only defined as a distribution."""


class ConfigError(ConeFourierError, ValueError):
    """Malformed CLI configuration."""


class SpecParseError(ConeFourierError, ValueError):
    """Malformed function specification file."""


class ParameterError(ConeFourierError, ValueError):
    """Invalid parameters for an evaluation target."""

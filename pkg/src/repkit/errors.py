"""Exception types shared across the toolkit."""


class RepkitError(Exception):
    """Base class for all toolkit errors."""


class SentinelCollision(RepkitError):
    """Input already contains the reserved sentinel byte 0."""


class SizeLimit(RepkitError):
    """Input or requested generation exceeds the configured byte budget."""


class InvalidParameter(RepkitError):
    """Family or operation parameter outside its documented domain."""


class OutOfRange(RepkitError):
    """Position or interval outside the text/array bounds."""


class EmptyInput(RepkitError):
    """Operation requires a non-empty sequence."""


class NotATiling(RepkitError):
    """Scheme phrases do not partition the text exactly."""


class CyclicScheme(RepkitError):
    """Copy graph of a scheme contains a cycle; decoding impossible."""


class InvalidParse(RepkitError):
    """Parse handed to a conversion is not of the required shape."""


class TruncationOutOfRange(RepkitError):
    """Substring rule bounds exceed the base rule's expansion."""


class NotInternal(RepkitError):
    """Collage rule expansion has no occurrence in the text where required."""


class OrderViolation(RepkitError):
    """Supplied suffix order cannot orient a required copy."""


class NonExtensibleOrder(RepkitError):
    """Order lacks the extension property assumed by the fast engine."""


class BudgetExceeded(RepkitError):
    """Brute-force search beyond its configured size/time budget."""


class LengthMismatch(RepkitError):
    """Internal corruption: cached expansion length disagrees with output."""


class InvariantViolation(RepkitError):
    """A theorem-mandated inequality failed while assembling a report."""

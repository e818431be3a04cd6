"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class BrimkitError(Exception):
    code = "error"
    exit_code = 2

    def __init__(self, message: str = "", **info):
        super().__init__(message)
        self.info = info


class InputError(BrimkitError):
    code = "input_error"


class RingMismatch(BrimkitError):
    code = "ring_mismatch"


class RankMismatch(BrimkitError):
    code = "rank_mismatch"


class InfiniteLength(BrimkitError):
    code = "infinite_length"


class InfiniteHomology(BrimkitError):
    code = "infinite_homology"


class CertificateMissing(BrimkitError):
    code = "certificate_missing"


class NotIdealOfDefinition(BrimkitError):
    code = "not_ideal_of_definition"


class LiftFailure(BrimkitError):
    code = "lift_failure"
    exit_code = 1


class NotAComplex(BrimkitError):
    code = "not_a_complex"
    exit_code = 1


class SpliceMismatch(NotAComplex):
    code = "splice_mismatch"


class IllDefinedMap(BrimkitError):
    code = "ill_defined_map"


class GradeBoundExceeded(BrimkitError):
    code = "grade_bound_exceeded"
    exit_code = 1


class NotYetPolynomial(BrimkitError):
    code = "not_yet_polynomial"


class NonPolynomialBehavior(BrimkitError):
    code = "non_polynomial_behavior"

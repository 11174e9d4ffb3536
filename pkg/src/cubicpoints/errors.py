"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent user input (bad dimension, bad matrix, ...)."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, required, allowed, what=""):
        self.required = required
        self.allowed = allowed
        msg = f"enumeration budget exceeded: need {required}, allowed {allowed}"
        if what:
            msg += f" ({what})"
        super().__init__(msg)


class DegenerateSliceError(InputError):
    """Slicing killed the cubic part of the polynomial."""


class NonLiftableError(RuntimeError):
    """Hensel lifting margin violated for the given witness."""


class SearchFailureError(RuntimeError):
    """A randomized or exhaustive search ran out of trials."""


class AmbiguityError(RuntimeError):
    """Sampled primes disagree; carries the per-prime values."""

    def __init__(self, per_prime):
        self.per_prime = dict(per_prime)
        super().__init__(f"sampled primes disagree: {self.per_prime}")

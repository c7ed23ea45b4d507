"""Exception hierarchy shared by the kernel and the command line."""


class KernelError(Exception):
    pass


class MalformedError(KernelError, ValueError):
    """A value violates a structural invariant (bad table, wrong typing, ...)."""


class NonCommutingSquare(MalformedError):
    pass


class GuardError(KernelError):
    """An enumeration would exceed its configured cap."""


DEFAULT_CAP = 100_000


def guard(count, cap=DEFAULT_CAP, what="enumeration"):
    if cap is not None and count > cap:
        raise GuardError(f"{what} exceeds cap: {count} > {cap}")
    return count

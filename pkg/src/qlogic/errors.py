"""Exception hierarchy. Every error raised by the library derives from QLogicError."""


class QLogicError(ValueError):
    pass


class NonHermitian(QLogicError):
    pass


class NonCommuting(QLogicError):
    def __init__(self, i, j, norm):
        super().__init__(f"operators {i} and {j} do not commute (||[a,b]|| = {norm:.3g})")
        self.pair = (i, j)
        self.norm = norm


class NotComparable(QLogicError):
    pass


class NotInContext(QLogicError):
    pass


class PosetTooLarge(QLogicError):
    pass


class VariantMismatch(QLogicError):
    pass


class PosetNotDownClosed(QLogicError):
    pass


class PreconditionViolated(QLogicError):
    pass


class CapExceeded(QLogicError):
    pass


class DoesNotReflect(QLogicError):
    def __init__(self, witness, norm):
        super().__init__(f"commutativity not reflected: images commute but ||[a,b]|| = {norm:.3g}")
        self.witness = witness
        self.norm = norm


class NotInImage(QLogicError):
    pass


class PosetNotClosed(QLogicError):
    pass


class InvalidState(QLogicError):
    pass

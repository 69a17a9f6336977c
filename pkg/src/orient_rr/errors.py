"""Exception hierarchy.  Every error carries a stable machine-readable ``code``."""


class OrientRRError(Exception):
    code = "error"


class ParseError(OrientRRError):
    code = "parse_error"


class EmptyGraph(OrientRRError):
    code = "empty_graph"


class LoopEdge(OrientRRError):
    code = "loop_edge"


class Disconnected(OrientRRError):
    code = "disconnected"


class UnknownVertex(OrientRRError):
    code = "unknown_vertex"


class EmptySubset(OrientRRError):
    code = "empty_subset"


class TooLarge(OrientRRError):
    code = "too_large"


class GraphMismatch(OrientRRError):
    code = "graph_mismatch"


class WrongDegree(OrientRRError):
    code = "wrong_degree"


class DegreeTooHigh(OrientRRError):
    code = "degree_too_high"


class Infeasible(OrientRRError):
    code = "infeasible"


class CapacityTooLarge(OrientRRError):
    code = "capacity_too_large"


class RRViolation(OrientRRError):
    code = "rr_violation"


class FingerprintMismatch(OrientRRError):
    code = "fingerprint_mismatch"


class BudgetExceeded(OrientRRError):
    code = "budget_exceeded"


class Cancelled(OrientRRError):
    code = "cancelled"


class PreconditionViolated(OrientRRError):
    code = "precondition_violated"

    def __init__(self, kind, detail, step=None):
        self.kind = kind
        self.detail = detail
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"{kind}: {detail}{where}")

"""Exception types shared by the solvers and the CLI."""


class SolverError(Exception):
    """Base class for numerical failures (maps to CLI exit code 1)."""


class CFLViolationError(SolverError):
    def __init__(self, operation, cfl, step_index=None):
        self.operation = operation
        self.cfl = cfl
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(f"{operation}: CFL number {cfl:.6g} exceeds 1{where}")


class NonFiniteFieldError(SolverError):
    def __init__(self, operation, cell_index, step_index=None):
        self.operation = operation
        self.cell_index = cell_index
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(
            f"{operation}: non-finite value at cell {cell_index}{where}"
        )


class VacuumError(SolverError):
    def __init__(self, operation, cell_index, step_index=None):
        self.operation = operation
        self.cell_index = cell_index
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(
            f"{operation}: nonpositive density at cell {cell_index}{where}"
        )


class StationaryFieldError(SolverError):
    def __init__(self, operation):
        super().__init__(
            f"{operation}: maximal wave speed is zero (stationary field); "
            "supply an explicit time step"
        )


class OracleConvergenceError(SolverError):
    def __init__(self, x, t, detail=""):
        self.x = x
        self.t = t
        msg = f"characteristic solve did not converge at x={x:.6g}, t={t:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)

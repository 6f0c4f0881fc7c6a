"""Exception hierarchy shared by all modules.

Each class carries the CLI exit code it maps to, so the front end never has
to know which module raised.
"""


class TaubNutError(Exception):
    exit_code = 2


class ValidationError(TaubNutError, ValueError):
    """Parameters or configuration violate their invariants."""


class DomainError(TaubNutError, ValueError):
    """Input lies outside the domain where a closed form is defined."""


class SingularPointError(DomainError):
    """Evaluation at r = -eta, where the conformal factor has a pole."""


class NoBoundOrbitError(DomainError):
    """No real pair of turning points exists at the requested energy."""


class OutOfAnnulusError(DomainError):
    """Radius outside [r_minus, r_plus]."""


class NoCrossingError(DomainError):
    """Target radius never reached by a sampled trajectory."""


class ConvergenceError(TaubNutError, RuntimeError):
    exit_code = 4


class StepFailureError(TaubNutError, RuntimeError):
    exit_code = 4


class BoundaryHitError(TaubNutError, RuntimeError):
    """Integration stopped near r = 0 or r = -eta.

    ``t_event`` is the time of the boundary event; ``trajectory`` holds the
    samples collected up to it.
    """

    exit_code = 3

    def __init__(self, message, t_event, trajectory=None):
        super().__init__(message)
        self.t_event = t_event
        self.trajectory = trajectory

"""Exception hierarchy for the trainer; every failure path raises one of these."""


class TrainerError(Exception):
    """Root of all errors this package raises on bad input or failed runs."""


class DatasetLayoutError(TrainerError):
    """The image directory tree or the assignment file is unusable."""


class UnknownBackboneError(TrainerError):
    """Requested backbone is not in the registry."""


class TrainingDivergedError(TrainerError):
    """Training produced a non-finite loss; nothing was exported."""

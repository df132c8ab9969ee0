"""Trainer failure modes."""


class TrainerError(Exception):
    """Base class for trainer failures."""


class EnvironmentFault(TrainerError):
    """A non-finite action or state reached the environment."""


class ExportError(TrainerError):
    """The network does not match the exportable actor architecture."""


class TrainingDivergedError(TrainerError):
    """Rewards or parameters went non-finite; a checkpoint was saved."""

    def __init__(self, message: str, checkpoint_paths: tuple[str, ...]) -> None:
        super().__init__(message)
        self.checkpoint_paths = checkpoint_paths

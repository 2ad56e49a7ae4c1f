class RejectedInputError(Exception):
    """
    A class that represents an input rejected by an operation, such as a
    tensor whose shape does not match what the operation expects.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the RejectedInputError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class ConflictError(Exception):
    """
    A class that represents a conflict with the current network structure,
    e.g. a duplicated id or removing a Node that is still referenced.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the ConflictError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class NotFoundError(Exception):
    """
    A class that represents a lookup of an unknown Node, PU, Environment or
    action.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the NotFoundError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class ConfigurationError(Exception):
    """
    A class that represents an invalid layout or run configuration.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the ConfigurationError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 2
        self.detail = detail
        super().__init__(detail)


class NonFiniteGradientError(Exception):
    """
    A class that represents a gradient with NaN or Inf entries that the
    optimizer was configured to reject.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the NonFiniteGradientError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class RuntimeFailureError(Exception):
    """
    A class that represents a failure while the network is running, such as
    an environment handler raising.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the RuntimeFailureError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class SnapshotMismatchError(Exception):
    """
    A class that represents a snapshot that cannot be restored into a
    network, because the structure or the parameters differ.

    - Attributes:
        - exit_code: The process exit code for this error.
        - detail: The error message.
    """

    def __init__(self, detail: str):
        """
        The constructor for the SnapshotMismatchError class.

        - Args:
            - detail: The error message.
        """
        self.exit_code = 3
        self.detail = detail
        super().__init__(detail)


class ValidationError(Exception):
    """
    A class that represents a validation error of a config field.

    - Attributes:
        - exit_code: The process exit code for this error.
        - field: The field that caused the error.
        - detail: The error message.
    """

    def __init__(self, field: str, detail: str):
        """
        The constructor for the ValidationError class.

        - Args:
            - field: The field that caused the error.
            - detail: The error message.
        """
        self.exit_code = 2
        self.field = field
        self.detail = detail
        super().__init__(f"{field}: {detail}")

class DomainError(ValueError):
    """Input is well-formed but physically or numerically out of range."""

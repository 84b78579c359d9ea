__all__ = ["reports"]

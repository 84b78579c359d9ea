__all__ = ["selection", "types", "lift"]

def scale_width(width, factor):
    base = width
    if base is None:
        return None
    return base * factor

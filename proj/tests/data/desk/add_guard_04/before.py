def scale_width(width, factor):
    base = width
    return base * factor

def scale_offset(offset, factor):
    base = offset
    if base is None:
        return None
    return base * factor

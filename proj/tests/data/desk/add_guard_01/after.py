def scale_limit(limit, factor):
    base = limit
    if base is None:
        return None
    return base * factor

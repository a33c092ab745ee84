def scale_port(port, factor):
    base = port
    if base is None:
        return None
    return base * factor

def join_config(config, sep):
    parts = config.parts
    return sep.join(parts)

def join_entry(entry, sep):
    parts = entry.parts
    parts = [str(p) for p in parts]
    return sep.join(parts)

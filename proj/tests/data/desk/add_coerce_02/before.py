def join_entry(entry, sep):
    parts = entry.parts
    return sep.join(parts)

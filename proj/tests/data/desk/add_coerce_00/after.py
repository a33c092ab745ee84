def join_item(item, sep):
    parts = item.parts
    parts = [str(p) for p in parts]
    return sep.join(parts)

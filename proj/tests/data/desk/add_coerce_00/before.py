def join_item(item, sep):
    parts = item.parts
    return sep.join(parts)

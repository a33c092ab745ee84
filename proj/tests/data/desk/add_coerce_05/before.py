def join_node(node, sep):
    parts = node.parts
    return sep.join(parts)

def read_node(node):
    data = node.read()
    return data.strip()

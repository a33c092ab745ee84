def read_node(node):
    data = node.read()
    data = data.decode('utf-8')
    return data.strip()

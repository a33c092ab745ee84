def encode_node(node, password):
    secret = '%s:%s' % (node.name, password)
    token = base64.b64encode(secret)
    return token

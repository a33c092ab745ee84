def report(node):
    retries = len(node.children)
    return 'node: ' + retries

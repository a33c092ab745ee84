def render(item):
    size = len(item.children)
    return 'item: ' + str(size)

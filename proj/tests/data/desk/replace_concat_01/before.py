def render(item):
    size = len(item.children)
    return 'item: ' + size

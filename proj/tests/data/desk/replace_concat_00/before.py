def describe(user):
    count = len(user.children)
    return 'user: ' + count

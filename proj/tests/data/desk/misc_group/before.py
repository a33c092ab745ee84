def pair(a, b):
    left = a + 1
    right = b + 1
    return left, right

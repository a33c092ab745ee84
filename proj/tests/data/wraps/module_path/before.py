def module_path(root, name):
    path = os.path.join(root, name)
    return open(path)

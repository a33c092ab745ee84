def module_path(root, name):
    path = to_native(os.path.join(root, name))
    return open(path)

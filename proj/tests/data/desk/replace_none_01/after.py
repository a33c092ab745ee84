def check_retries(retries):
    if retries is None:
        return 0
    return retries * 2

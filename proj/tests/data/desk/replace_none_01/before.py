def check_retries(retries):
    if retries == None:
        return 0
    return retries * 2

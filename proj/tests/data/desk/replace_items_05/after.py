def first_key_request(request):
    request_keys = sorted(request)
    return request_keys.items()

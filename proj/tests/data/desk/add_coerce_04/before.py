def join_request(request, sep):
    parts = request.parts
    return sep.join(parts)

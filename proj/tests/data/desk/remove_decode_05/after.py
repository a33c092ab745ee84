def read_request(request):
    data = request.read()
    return data.strip()

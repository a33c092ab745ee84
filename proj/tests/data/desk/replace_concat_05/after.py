def banner(request):
    offset = len(request.children)
    return 'request: ' + str(offset)

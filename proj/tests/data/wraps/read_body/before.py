def read_body(response):
    data = response.read()
    return json.loads(data)

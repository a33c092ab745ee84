def read_entry(entry):
    data = entry.read()
    data = data.decode('utf-8')
    return data.strip()

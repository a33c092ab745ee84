def read_entry(entry):
    data = entry.read()
    return data.strip()

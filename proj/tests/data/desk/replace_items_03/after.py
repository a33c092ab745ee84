def first_key_entry(entry):
    entry_keys = sorted(entry)
    return entry_keys.items()

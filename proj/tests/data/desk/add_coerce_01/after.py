def join_record(record, sep):
    parts = record.parts
    parts = [str(p) for p in parts]
    return sep.join(parts)

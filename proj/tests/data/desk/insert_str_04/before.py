def show_offset(offset, out):
    text = offset
    out.write(text)

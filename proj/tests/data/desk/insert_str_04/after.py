def show_offset(offset, out):
    text = str(offset)
    out.write(text)

def show_size(size, out):
    text = size
    out.write(text)

def show_port(port, out):
    text = port
    out.write(text)

class Box:
    @property
    def label(self):
        # shown in the header
        return self._size + 'px'

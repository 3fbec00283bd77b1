// placeholder, module lands in a later commit of this change

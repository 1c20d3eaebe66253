class COMMANDS:
    global_value = "global"
    psucc = "psucc"
    entcost = "entcost"
    lp = "lp"
    composite = "composite"
    damping = "damping"

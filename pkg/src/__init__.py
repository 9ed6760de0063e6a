# qvsep - verificacion de estados cuanticos con medidas separables

# Comandos de la linea de comandos

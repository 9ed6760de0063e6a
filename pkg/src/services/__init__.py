# Servicios de la aplicacion

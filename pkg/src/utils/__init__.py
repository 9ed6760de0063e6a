# Paquete de utilidades del sistema